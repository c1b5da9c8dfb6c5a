#include "doctest.h"

#include <cmath>

#include "alab/rootsys.hpp"
#include "oracles.hpp"

using alab::QMatrix;
using alab::Rational;
namespace rs = alab::rootsys;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

}  // namespace

TEST_CASE("type labels") {
  CHECK(rs::RootType::parse("d4").label() == "D4");
  CHECK(rs::RootType::parse("E8").rank == 8);
  for (const char* bad : {"D3", "E5", "E9", "F5", "G3", "A0", "A9", "B1", "X2", "", "A", "A2x"})
    CHECK_THROWS_AS(rs::RootType::parse(bad), std::invalid_argument);
  CHECK(rs::supported_types().size() == 32);
}

TEST_CASE("D4 roots and weights") {
  const auto d4 = rs::build_root_system("D4");
  const std::vector<std::vector<Rational>> roots{{1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}, {0, 0, 1, 1}};
  const std::vector<std::vector<Rational>> weights{
      {1, 0, 0, 0}, {1, 1, 0, 0}, {q("1/2"), q("1/2"), q("1/2"), q("-1/2")}, {q("1/2"), q("1/2"), q("1/2"), q("1/2")}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(d4.root(i) == roots[i]);
    CHECK(d4.weight(i) == weights[i]);
  }
  const auto w = rs::normalized_weights(d4);
  CHECK(w(0, 1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(w(1, 1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  for (int j : {0, 2, 3})
    for (int i = 0; i < 4; ++i) CHECK(w(i, j) == doctest::Approx(d4.fund_weights(i, j).to_double()));
}

TEST_CASE("A1 and A2 small cases") {
  const auto a1 = rs::build_root_system("A1");
  CHECK(alab::dot(a1.root(0), a1.root(0)) == Rational(2));
  CHECK(a1.weight(0)[0] * Rational(2) == a1.root(0)[0]);
  const auto k1 = rs::coeff_matrices(a1);
  CHECK(k1.c == QMatrix{{2}});
  CHECK(k1.n == QMatrix{{q("1/2")}});

  const auto a2 = rs::build_root_system("A2");
  CHECK(rs::cartan_matrix(a2) == QMatrix{{2, -1}, {-1, 2}});
  CHECK(rs::coeff_matrices(a2).n == QMatrix{{q("2/3"), q("1/3")}, {q("1/3"), q("2/3")}});
  CHECK(rs::orthogonality_check(a2).pairings(0, 0) == Rational(1));
}

TEST_CASE("B2 Cartan orientation") {
  // alpha_1 = e1 - e2 long, alpha_2 = e2 short
  CHECK(rs::cartan_matrix(rs::build_root_system("B2")) == QMatrix{{2, -2}, {-1, 2}});
  CHECK(rs::cartan_matrix(rs::build_root_system("G2"))(1, 0) == Rational(-3));
}

TEST_CASE("property: every type against the Dynkin-diagram oracle") {
  for (const auto& t : rs::supported_types()) {
    CAPTURE(t.label());
    const auto data = rs::build_root_system(t);
    REQUIRE(data.rank() == static_cast<std::size_t>(t.rank));
    const auto expect = oracle::cartan(t.family, t.rank);
    const auto c = rs::cartan_matrix(data);
    for (int i = 0; i < t.rank; ++i)
      for (int j = 0; j < t.rank; ++j) REQUIRE(c(i, j) == Rational(expect[i][j]));

    // <omega_i, alpha_j^vee> = delta_ij
    for (std::size_t i = 0; i < data.rank(); ++i)
      for (std::size_t j = 0; j < data.rank(); ++j) {
        const auto a = data.root(j);
        const Rational pair = Rational(2) * alab::dot(data.weight(i), a) / alab::dot(a, a);
        REQUIRE(pair == Rational(i == j ? 1 : 0));
      }

    const auto k = rs::coeff_matrices(data);
    const auto inv = oracle::inverse(expect);
    for (std::size_t i = 0; i < data.rank(); ++i)
      for (std::size_t j = 0; j < data.rank(); ++j) {
        REQUIRE(k.n(i, j).raw() == inv[i][j]);
        REQUIRE(k.n(i, j) >= Rational(0));
        if (i == j) REQUIRE(k.n(i, i) > Rational(0));
      }
    REQUIRE(k.c * k.n == QMatrix::identity(data.rank()));

    // alpha_i = sum_j c_ij omega_j
    for (std::size_t i = 0; i < data.rank(); ++i) {
      std::vector<Rational> sum(data.ambient_dim, Rational(0));
      for (std::size_t j = 0; j < data.rank(); ++j)
        for (std::size_t r = 0; r < data.ambient_dim; ++r) sum[r] += k.c(i, j) * data.fund_weights(r, j);
      REQUIRE(sum == data.root(i));
    }

    const auto report = rs::orthogonality_check(data);
    REQUIRE(report.ok);
    REQUIRE(report.violations.empty());

    const auto w = rs::normalized_weights(data);
    for (Eigen::Index j = 0; j < w.cols(); ++j) REQUIRE(w.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
