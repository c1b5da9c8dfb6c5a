#include "doctest.h"

#include <set>

#include "alab/bttree.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace bt = alab::bttree;
using alab::Rational;

namespace {

long oracle_distance(const bt::Vertex& v, const bt::Vertex& w, long p) {
  return oracle::ball_distance(v.m, v.a.raw(), w.m, w.a.raw(), p);
}

// Random SL2 element as a product of elementary and diagonal matrices with
// p-power entries.
bt::Mat2 random_sl2(std::mt19937_64& rng, long p) {
  std::uniform_int_distribution<int> kind(0, 2), e(-2, 2), coef(-3, 3);
  bt::Mat2 g = bt::diag(1, 1);
  for (int i = 0; i < 3; ++i) {
    const Rational x = Rational(coef(rng)) * Rational(p).pow(e(rng));
    bt::Mat2 s;
    switch (kind(rng)) {
      case 0: s = bt::unipotent(x); break;
      case 1: s = {Rational(1), Rational(0), x, Rational(1)}; break;
      default: {
        const Rational a = Rational(p).pow(e(rng));
        s = bt::diag(a, a.inverse());
      }
    }
    g = bt::mat_mul(g, s);
  }
  return g;
}

}  // namespace

TEST_CASE("matrix helpers") {
  const auto g = bt::mat_mul(bt::diag(2, Rational::parse("1/2")), bt::unipotent(3));
  CHECK(g == bt::Mat2{Rational(2), Rational(6), Rational(0), Rational::parse("1/2")});
  CHECK(bt::det(g) == Rational(1));
  CHECK_THROWS_AS(bt::Tree(4), std::invalid_argument);
  CHECK_THROWS_AS(bt::Tree(2, 0), std::invalid_argument);
}

TEST_CASE("action examples") {
  const bt::Tree t(2);
  const auto o = t.origin();
  CHECK(t.act(bt::diag(1, 1), o) == o);
  const auto v = t.act(bt::diag(2, 1), o);
  CHECK(t.distance(o, v) == 1);
  CHECK(t.distance(o, t.act(bt::diag(4, 1), o)) == 2);
  CHECK(t.act(bt::diag(Rational::parse("1/2"), 1), o) == t.ray(bt::End::infinity(), 1));
  CHECK(t.act(bt::unipotent(Rational(5)), o) == o);
  CHECK(t.act(bt::unipotent(Rational::parse("3/7")), o) == o);
  CHECK_FALSE(t.act(bt::unipotent(Rational::parse("1/2")), o) == o);
  CHECK_THROWS_WITH(t.act(bt::diag(Rational(2).pow(40), 1), o), "increase depth");
  CHECK_THROWS(t.act(bt::Mat2{Rational(1), Rational(2), Rational(2), Rational(4)}, o));
}

TEST_CASE("canonical forms") {
  const bt::Tree t(3);
  CHECK(t.from_basis(bt::diag(1, 1)) == t.origin());
  // scaling the lattice does not change the class
  CHECK(t.from_basis(bt::diag(3, 3)) == t.origin());
  const bt::Vertex v{2, Rational(5)};
  CHECK(t.from_basis(t.basis(v)) == v);
  CHECK(t.from_basis(bt::Mat2{Rational(9), Rational(14), Rational(0), Rational(1)}) == v);
  CHECK(bt::to_string(v) == "(2,5)");
}

TEST_CASE("neighbors are the p sub-balls and the parent") {
  for (long p : {2L, 3L, 5L, 7L}) {
    const bt::Tree t(p);
    const auto nb = t.neighbors(t.origin());
    CHECK(nb.size() == static_cast<std::size_t>(p + 1));
    std::set<bt::Vertex> expected{{-1, Rational(0)}};
    for (long k = 0; k < p; ++k) expected.insert({1, Rational(k)});
    CHECK(std::set<bt::Vertex>(nb.begin(), nb.end()) == expected);
    for (const auto& w : nb) CHECK(t.distance(t.origin(), w) == 1);
  }
}

TEST_CASE("busemann examples") {
  const bt::Tree t(2);
  const auto inf = bt::End::infinity();
  CHECK(t.busemann(inf, t.origin()) == 0);
  CHECK(t.busemann(inf, t.act(bt::diag(2, 1), t.origin()), 5) == -1);
  auto rng = gen::rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto x = t.random_vertex(rng);
    CHECK(t.busemann(inf, t.act(bt::unipotent(Rational(3)), x)) == t.busemann(inf, x));
  }
  CHECK_THROWS_AS(t.busemann(inf, bt::Vertex{3, Rational(1)}, 5), std::invalid_argument);
}

TEST_CASE("transformation law") {
  const bt::Tree t(2);
  auto rng = gen::rng(9);
  std::vector<bt::Vertex> xs;
  for (int i = 0; i < 60; ++i) xs.push_back(t.random_vertex(rng));
  const auto id = t.horofunction_transform_check(bt::diag(1, 1), xs);
  CHECK(id.constant == 0L);
  const auto d = t.horofunction_transform_check(bt::diag(2, Rational::parse("1/2")), xs);
  CHECK(d.verdict == "pass");
  CHECK(d.constant == -2L);
  CHECK(d.log_chi == -2);
  CHECK(d.c == Rational(1));
  const auto d2 = t.horofunction_transform_check(bt::diag(4, Rational::parse("1/4")), xs);
  CHECK(d2.constant == -4L);
  const auto u = t.horofunction_transform_check(bt::unipotent(Rational::parse("1/2")), xs);
  CHECK(u.constant == 0L);
  CHECK(u.log_chi == 0);
  CHECK_FALSE(u.c.has_value());
  CHECK_THROWS(t.horofunction_transform_check(bt::Mat2{Rational(1), Rational(0), Rational(1), Rational(1)}, xs));
  CHECK_THROWS(t.horofunction_transform_check(bt::diag(2, 1), xs));
}

TEST_CASE("property: distance agrees with the ball model") {
  for (long p : {2L, 3L, 5L}) {
    const bt::Tree t(p, 6);
    auto rng = gen::rng(static_cast<unsigned long long>(p));
    for (int i = 0; i < 300; ++i) {
      const auto v = t.random_vertex(rng), w = t.random_vertex(rng);
      REQUIRE(t.distance(v, w) == oracle_distance(v, w, p));
      REQUIRE(t.distance(v, w) == t.distance(w, v));
      REQUIRE(t.distance(t.origin(), v) <= t.depth());
    }
  }
}

TEST_CASE("property: act is an isometry on 200 triples") {
  for (long p : {2L, 3L}) {
    const bt::Tree t(p, 8);
    auto rng = gen::rng(100 + static_cast<unsigned long long>(p));
    for (int i = 0; i < 200; ++i) {
      const auto g = random_sl2(rng, p);
      REQUIRE(bt::det(g) == Rational(1));
      const auto v = t.random_vertex(rng), w = t.random_vertex(rng);
      REQUIRE(t.distance(t.act(g, v), t.act(g, w)) == t.distance(v, w));
    }
  }
}

TEST_CASE("property: busemann values match the ball-model limit and stabilize") {
  for (long p : {2L, 3L}) {
    const bt::Tree t(p, 8);
    auto rng = gen::rng(55 + static_cast<unsigned long long>(p));
    const std::vector<bt::End> ends{bt::End::infinity(), bt::End::at(Rational(0)), bt::End::at(Rational(1)),
                                    bt::End::at(Rational(1) / Rational(p)),
                                    bt::End::at(Rational(p + 1) / Rational(p * p))};
    for (int i = 0; i < 100; ++i) {
      const auto x = t.random_vertex(rng);
      for (const auto& e : ends) {
        CAPTURE(e.label());
        const long T = t.distance(t.origin(), x) + 3;
        const long b = t.busemann(e, x, T);
        std::optional<mpq_class> xi;
        if (e.xi) xi = e.xi->raw();
        REQUIRE(b == oracle::busemann_limit(x.m, x.a.raw(), xi, p));
        REQUIRE(t.busemann(e, x, T + 1) == b);
        REQUIRE(t.busemann(e, x, T + 2) == b);
      }
    }
  }
}

TEST_CASE("property: ray steps one edge at a time") {
  const bt::Tree t(3, 8);
  for (const auto& e : {bt::End::infinity(), bt::End::at(Rational::parse("2/9")), bt::End::at(Rational(4))})
    for (long s = 0; s < 10; ++s) {
      REQUIRE(t.distance(t.ray(e, s), t.ray(e, s + 1)) == 1);
      REQUIRE(t.distance(t.origin(), t.ray(e, s)) == s);
    }
}

TEST_CASE("property: shifts form a cocycle on the Borel") {
  const bt::Tree t(2, 8);
  auto rng = gen::rng(77);
  std::vector<bt::Vertex> xs;
  for (int i = 0; i < 60; ++i) xs.push_back(t.random_vertex(rng));
  std::uniform_int_distribution<int> e(-2, 2), x(-4, 4);
  for (int i = 0; i < 30; ++i) {
    const Rational a = Rational(2).pow(e(rng)), b = Rational(2).pow(e(rng));
    const auto g = bt::mat_mul(bt::diag(a, a.inverse()), bt::unipotent(Rational(x(rng)) / Rational(2)));
    const auto h = bt::mat_mul(bt::diag(b, b.inverse()), bt::unipotent(Rational(x(rng))));
    const auto sg = t.horofunction_transform_check(g, xs), sh = t.horofunction_transform_check(h, xs),
               sgh = t.horofunction_transform_check(bt::mat_mul(g, h), xs);
    REQUIRE(sg.constant);
    REQUIRE(sh.constant);
    REQUIRE(sgh.constant == *sg.constant + *sh.constant);
    REQUIRE(*sg.constant == sg.log_chi);
  }
}
