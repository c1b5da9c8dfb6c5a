#include "alab/places.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

#include "alab/arith.hpp"

namespace alab::places {

namespace {

void require_nonzero(const Rational& q, const char* what) {
  if (q.is_zero()) throw std::domain_error(std::string(what) + " of zero undefined");
}

void require_prime(const Integer& p) {
  if (!arith::is_prime(p)) throw std::invalid_argument(p.get_str() + " is not prime");
}

}  // namespace

Place Place::finite(const Integer& p) {
  require_prime(p);
  Place s;
  s.prime_ = p;
  return s;
}

const Integer& Place::prime() const {
  if (!prime_) throw std::logic_error("the infinite place has no prime");
  return *prime_;
}

std::string Place::label() const { return prime_ ? prime_->get_str() : "inf"; }

long valuation(const Rational& q, const Integer& p) {
  require_nonzero(q, "valuation");
  require_prime(p);
  Integer num = q.numerator();
  Integer den = q.denominator();
  long up = static_cast<long>(arith::remove_factor(num, p));
  long down = static_cast<long>(arith::remove_factor(den, p));
  return up - down;
}

AbsValue normalized_abs(const Rational& q, const Place& s) {
  require_nonzero(q, "absolute value");
  if (s.is_infinite()) return {s, q.abs()};
  long v = valuation(q, s.prime());
  return {s, Rational(s.prime()).pow(-v)};
}

std::vector<Place> support(const Rational& q) {
  require_nonzero(q, "support");
  std::vector<Place> out{Place::infinite()};
  auto num_primes = arith::prime_divisors(q.numerator());
  auto den_primes = arith::prime_divisors(q.denominator());
  std::vector<Integer> primes;
  primes.reserve(num_primes.size() + den_primes.size());
  // numerator and denominator are coprime, so the union is disjoint
  std::merge(num_primes.begin(), num_primes.end(), den_primes.begin(), den_primes.end(),
             std::back_inserter(primes));
  for (const auto& p : primes) out.push_back(Place::finite(p));
  return out;
}

Rational product_formula(const Rational& q) {
  Rational prod(1);
  for (const auto& s : support(q)) prod *= normalized_abs(q, s).value;
  return prod;
}

bool s_integer_window_test(const Rational& q, std::span<const Integer> S, const Rational& c) {
  if (S.empty()) throw std::invalid_argument("S must be nonempty");
  if (c.sign() <= 0) throw std::invalid_argument("window radius must be positive");
  for (const auto& p : S) require_prime(p);
  if (q.abs() > c) return false;
  if (q.is_zero()) return true;
  Integer den = q.denominator();
  for (const auto& p : S) arith::remove_factor(den, p);
  return den == 1;
}

bool s_integer_window_test(const Rational& q, std::span<const Integer> S, double c) {
  return s_integer_window_test(q, S, Rational::from_double(c));
}

}  // namespace alab::places
