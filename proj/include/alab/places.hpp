#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alab/rational.hpp"

namespace alab::places {

/// A place of Q: a prime p, or the archimedean place.
class Place {
public:
  /// Throws std::invalid_argument unless p is prime.
  static Place finite(const Integer& p);
  static Place finite(long p) { return finite(Integer(p)); }
  static Place infinite() { return Place(); }

  bool is_finite() const { return prime_.has_value(); }
  bool is_infinite() const { return !prime_; }
  /// Only valid for finite places.
  const Integer& prime() const;

  /// "p" for finite places, "inf" for the archimedean one.
  std::string label() const;

  friend bool operator==(const Place&, const Place&) = default;

private:
  Place() = default;
  std::optional<Integer> prime_;
};

/// Normalized absolute value |x|_s. For rational inputs the value is exact at
/// every place: p^(-v) at p, the ordinary |x| at infinity.
struct AbsValue {
  Place place;
  Rational value;

  double to_double() const { return value.to_double(); }
};

long valuation(const Rational& q, const Integer& p);
inline long valuation(const Rational& q, long p) { return valuation(q, Integer(p)); }

AbsValue normalized_abs(const Rational& q, const Place& s);

/// The archimedean place followed by the primes dividing numerator or
/// denominator, in increasing order.
std::vector<Place> support(const Rational& q);

/// Exact product of |q|_s over all places. Always 1 for q != 0.
Rational product_formula(const Rational& q);

/// |q|_p <= 1 for every prime outside S, and |q|_inf <= c.
bool s_integer_window_test(const Rational& q, std::span<const Integer> S, const Rational& c);
bool s_integer_window_test(const Rational& q, std::span<const Integer> S, double c);

}  // namespace alab::places
