#include "doctest.h"

#include <vector>

#include "alab/arith.hpp"
#include "alab/places.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using alab::Integer;
using alab::Rational;
namespace places = alab::places;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

Rational abs_at(const Rational& x, long p) { return places::normalized_abs(x, places::Place::finite(p)).value; }

}  // namespace

TEST_CASE("rational normal form") {
  CHECK(q("6/-4") == q("-3/2"));
  CHECK(q(" 10/4 ").to_string() == "5/2");
  CHECK(q("0/7").denominator() == 1);
  CHECK(q("-0").is_zero());
  CHECK_THROWS_AS(q("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(q("abc"), std::invalid_argument);
  CHECK_THROWS_AS(q("1/"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK(Rational::from_double(0.375) == q("3/8"));
  CHECK(q("2/3").pow(-2) == q("9/4"));
}

TEST_CASE("valuation") {
  CHECK(places::valuation(q("3/2"), 2L) == -1);
  CHECK(places::valuation(q("2000"), 5L) == 3);
  CHECK(places::valuation(q("1"), 7L) == 0);
  CHECK_THROWS_WITH(places::valuation(q("0"), 3L), "valuation of zero undefined");
  CHECK_THROWS_AS(places::valuation(q("4"), 4L), std::invalid_argument);
}

TEST_CASE("normalized absolute values") {
  CHECK(abs_at(q("3/2"), 2) == Rational(2));
  CHECK(places::normalized_abs(q("3/2"), places::Place::infinite()).value == q("3/2"));
  CHECK(places::normalized_abs(q("-3/2"), places::Place::infinite()).to_double() == doctest::Approx(1.5));
  for (long p : {2L, 3L, 5L, 101L}) CHECK(abs_at(Rational(1), p) == Rational(1));
  CHECK_THROWS(places::normalized_abs(Rational(0), places::Place::infinite()));
  CHECK_THROWS_AS(places::Place::finite(1L), std::invalid_argument);
  CHECK_THROWS_AS(places::Place::finite(91L), std::invalid_argument);
}

TEST_CASE("product formula examples") {
  CHECK(places::product_formula(q("3/2")) == Rational(1));
  CHECK(places::product_formula(q("-1")) == Rational(1));
  CHECK(places::product_formula(q("2250/77")) == Rational(1));
  // 2250 = 2 * 3^2 * 5^3, 77 = 7 * 11
  std::vector<std::string> labels;
  for (const auto& s : places::support(q("2250/77"))) labels.push_back(s.label());
  CHECK(labels == std::vector<std::string>{"inf", "2", "3", "5", "7", "11"});
  CHECK_THROWS(places::product_formula(Rational(0)));
}

TEST_CASE("S-integer window") {
  const std::vector<Integer> five{5};
  CHECK(places::s_integer_window_test(q("1/5"), five, Rational(1)));
  CHECK_FALSE(places::s_integer_window_test(q("1/3"), five, Rational(1)));
  CHECK(places::s_integer_window_test(q("7/25"), five, Rational(1)));
  CHECK_FALSE(places::s_integer_window_test(q("26/25"), five, Rational(1)));
  CHECK(places::s_integer_window_test(q("26/25"), five, 1.5));
  CHECK(places::s_integer_window_test(Rational(0), five, Rational(1)));
  CHECK_THROWS(places::s_integer_window_test(q("1/5"), std::vector<Integer>{}, Rational(1)));
  CHECK_THROWS(places::s_integer_window_test(q("1/5"), five, Rational(0)));
  CHECK_THROWS(places::s_integer_window_test(q("1/5"), std::vector<Integer>{6}, Rational(1)));
}

TEST_CASE("prime divisors against trial division") {
  auto rng = gen::rng(11);
  std::uniform_int_distribution<long> d(2, 2000000);
  for (int i = 0; i < 300; ++i) {
    long n = d(rng);
    std::vector<Integer> expected;
    long m = n;
    for (long f = 2; f * f <= m; ++f)
      if (m % f == 0) {
        expected.emplace_back(f);
        while (m % f == 0) m /= f;
      }
    if (m > 1) expected.emplace_back(m);
    CHECK(alab::arith::prime_divisors(Integer(n)) == expected);
  }
  // a product of two 31-bit primes needs the rho step
  const Integer big = Integer("2147483647") * Integer("2147483629");
  CHECK(alab::arith::prime_divisors(big) == std::vector<Integer>{Integer("2147483629"), Integer("2147483647")});
}

TEST_CASE("property: product formula over seeded rationals up to 10^12") {
  auto rng = gen::rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const Rational x = gen::rational(rng, 1000000000000LL);
    REQUIRE(places::product_formula(x) == Rational(1));
  }
}

TEST_CASE("property: valuation matches repeated division") {
  auto rng = gen::rng(7);
  for (int i = 0; i < 500; ++i) {
    const Rational x = gen::rational(rng, 1000000);
    for (long p : {2L, 3L, 5L, 7L}) REQUIRE(places::valuation(x, p) == oracle::valuation(x.raw(), p));
  }
}

TEST_CASE("property: multiplicativity and the ultrametric inequality") {
  auto rng = gen::rng(99);
  for (int i = 0; i < 500; ++i) {
    const Rational x = gen::rational(rng, 100000), y = gen::rational(rng, 100000);
    for (long p : {2L, 3L, 5L}) {
      REQUIRE(abs_at(x * y, p) == abs_at(x, p) * abs_at(y, p));
      if (!(x + y).is_zero()) {
        const Rational s = abs_at(x + y, p), m = std::max(abs_at(x, p), abs_at(y, p));
        REQUIRE(s <= m);
        if (abs_at(x, p) != abs_at(y, p)) REQUIRE(s == m);
      }
    }
    const auto inf = places::Place::infinite();
    REQUIRE(places::normalized_abs(x * y, inf).value ==
            places::normalized_abs(x, inf).value * places::normalized_abs(y, inf).value);
  }
}

TEST_CASE("property: window symmetric and contains 0 and 1") {
  auto rng = gen::rng(5);
  const std::vector<Integer> S{5, 7};
  for (int i = 0; i < 300; ++i) {
    const Rational x = gen::p_rational(rng, 5, 40, 3);
    REQUIRE(places::s_integer_window_test(x, S, Rational(2)) == places::s_integer_window_test(-x, S, Rational(2)));
  }
  CHECK(places::s_integer_window_test(Rational(0), S, Rational(1)));
  CHECK(places::s_integer_window_test(Rational(1), S, Rational(1)));
}
