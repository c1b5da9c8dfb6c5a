#pragma once

#include <vector>

#include "alab/rational.hpp"

namespace alab::arith {

/// Primality with GMP's Miller-Rabin (40 rounds; deterministic below 2^64).
bool is_prime(const Integer& n);

/// Distinct prime divisors of |n| in increasing order. n != 0.
std::vector<Integer> prime_divisors(const Integer& n);

/// Largest e with p^e | n, n != 0. Strips the factor from n when `n` is mutable.
unsigned long remove_factor(Integer& n, const Integer& p);

Integer ipow(const Integer& base, unsigned long e);

}  // namespace alab::arith
