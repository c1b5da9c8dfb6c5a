#pragma once

// Seeded generators for property tests.

#include <random>
#include <string>
#include <vector>

#include "alab/rational.hpp"

namespace gen {

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

// Nonzero rational with numerator and denominator up to `bound`.
inline alab::Rational rational(std::mt19937_64& r, long long bound) {
  std::uniform_int_distribution<long long> d(1, bound);
  const long long num = d(r) * ((r() & 1) ? 1 : -1);
  return alab::Rational(alab::Integer(std::to_string(num)), alab::Integer(std::to_string(d(r))));
}

// m / p^k with |m| <= bound and k <= kmax.
inline alab::Rational p_rational(std::mt19937_64& r, long p, long bound, long kmax) {
  std::uniform_int_distribution<long> m(-bound, bound), k(0, kmax);
  return alab::Rational(alab::Integer(m(r)), alab::Integer(1)) / alab::Rational(p).pow(k(r));
}

inline std::vector<std::vector<double>> cloud(std::mt19937_64& r, std::size_t n, double side) {
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<std::vector<double>> pts(n);
  for (auto& p : pts) p = {u(r), u(r)};
  return pts;
}

}  // namespace gen
