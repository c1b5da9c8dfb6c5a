#include "alab/rational.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace alab {

namespace {

Integer parse_integer(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9')
      throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return Integer(digits, 10);
}

}  // namespace

Rational::Rational(long long v) {
  // mpq_class has no long long constructor on every platform.
  q_ = mpq_class(Integer(std::to_string(v), 10));
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  std::string_view t = trim(text);
  auto slash = t.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(t, text));
  Integer num = parse_integer(trim(t.substr(0, slash)), text);
  Integer den = parse_integer(trim(t.substr(slash + 1)), text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

Rational Rational::from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite double");
  return Rational(mpq_class(v));
}

Rational Rational::abs() const {
  Rational r;
  r.q_ = ::abs(q_);
  return r;
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  Rational r;
  r.q_ = 1 / q_;
  r.q_.canonicalize();
  return r;
}

Rational Rational::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

std::string Rational::to_string() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational operator-(const Rational& a) {
  Rational r;
  r.q_ = -a.q_;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

std::size_t RationalHash::operator()(const Rational& r) const {
  std::size_t h1 = mpz_get_ui(r.raw().get_num_mpz_t()) ^ (static_cast<std::size_t>(r.sign()) << 63);
  std::size_t h2 = mpz_get_ui(r.raw().get_den_mpz_t());
  return std::hash<std::size_t>{}(h1 * 0x9e3779b97f4a7c15ULL ^ h2);
}

}  // namespace alab
