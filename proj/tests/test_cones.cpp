#include "doctest.h"

#include <cmath>

#include "alab/cones.hpp"
#include "generators.hpp"

namespace cones = alab::cones;
namespace rs = alab::rootsys;

namespace {

const double kRoot2 = std::sqrt(2.0);

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::vector<cones::AffineForm> orthonormal(int r) {
  std::vector<cones::AffineForm> f;
  for (int i = 0; i < r; ++i) f.emplace_back(Eigen::VectorXd::Unit(r, i));
  return f;
}

}  // namespace

TEST_CASE("affine forms reject a zero linear part") {
  CHECK_THROWS_AS(cones::AffineForm(Eigen::VectorXd::Zero(3)), std::invalid_argument);
  cones::AffineForm f(vec({1, 2}), 3);
  CHECK(f(vec({1, 1})) == doctest::Approx(6));
  CHECK(f.scaled(2)(vec({1, 1})) == doctest::Approx(12));
}

TEST_CASE("tip normal cones") {
  auto quad = cones::tip_normal_cone(orthonormal(2));
  CHECK(quad.contains(vec({0.3, 2})));
  CHECK(quad.contains(vec({0, 0})));
  CHECK_FALSE(quad.contains(vec({-0.1, 1})));

  std::vector<cones::AffineForm> half{cones::AffineForm(vec({1, 0}))};
  auto ray = cones::tip_normal_cone(half);
  CHECK(ray.contains(vec({4, 0})));
  CHECK_FALSE(ray.contains(vec({1, 1})));
  CHECK_FALSE(ray.contains(vec({-1, 0})));

  std::vector<cones::AffineForm> dep{cones::AffineForm(vec({1, 0})), cones::AffineForm(vec({2, 0}))};
  CHECK_THROWS_WITH(cones::tip_normal_cone(dep), "degenerate tip");

  const auto d4 = cones::weight_forms(rs::build_root_system("D4"));
  // v is the tip of the level-1 set: every normalized weight form equals 1 there
  const Eigen::VectorXd v = vec({1, kRoot2 - 1, 2 - kRoot2, 0});
  for (const auto& f : d4) CHECK(f(v) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> ones(4, 1.0);
  CHECK((cones::nested_normal_set(d4, ones, 0, 1).tip_t - v).norm() < 1e-9);
  CHECK(cones::tip_normal_cone(d4).generators().size() == 4);
}

TEST_CASE("nested normal sets") {
  const std::vector<double> ones2{1, 1};
  CHECK(cones::nested_normal_set_check(orthonormal(2), ones2, 0, 1));

  const auto d4 = cones::weight_forms(rs::build_root_system("D4"));
  const std::vector<double> ones4(4, 1.0);
  CHECK_FALSE(cones::nested_normal_set_check(d4, ones4, 0, 1));
  const auto scal = cones::rescale_constants(d4);
  CHECK(cones::nested_normal_set_check(d4, scal, 0, 1));

  CHECK_THROWS(cones::nested_normal_set_check(d4, ones4, 1, 0));
  const std::vector<double> bad{1, -1, 1, 1};
  CHECK_THROWS(cones::nested_normal_set_check(d4, bad, 0, 1));
}

TEST_CASE("rescaling") {
  const auto s = cones::rescale_constants(orthonormal(3));
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(s[1]));
  CHECK(s[1] == doctest::Approx(s[2]));
  const auto a2 = cones::weight_forms(rs::build_root_system("A2"));
  CHECK(cones::nested_normal_set_check(a2, cones::rescale_constants(a2), 0, 1));
}

TEST_CASE("D4 classification values") {
  const auto c = cones::linear_type_classification(rs::RootType::parse("D4"));
  CHECK_FALSE(c.is_linear);
  const double v[4] = {1, kRoot2 - 1, 2 - kRoot2, 0};
  const double va[4] = {2 - kRoot2, 2 * kRoot2 - 3, 2 - kRoot2, 2 - kRoot2};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::fabs(c.v(i) - v[i]) < 1e-9);
    CHECK(std::fabs(c.v_dot_roots(i) - va[i]) < 1e-9);
  }
  const auto raw = cones::linear_type_classification(rs::RootType::parse("D4"), false);
  const double v2[4] = {1, 0, 1, 0}, va2[4] = {1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::fabs(raw.v(i) - v2[i]) < 1e-9);
    CHECK(std::fabs(raw.v_dot_roots(i) - va2[i]) < 1e-9);
  }
}

TEST_CASE("property: classification splits on the diagram shape") {
  for (const auto& t : rs::supported_types()) {
    CAPTURE(t.label());
    CHECK(cones::linear_type_classification(t).is_linear == t.linear_diagram());
  }
}

TEST_CASE("property: rescaled weights are nested for every type") {
  for (const auto& t : rs::supported_types()) {
    CAPTURE(t.label());
    const auto forms = cones::weight_forms(rs::build_root_system(t));
    const auto r = cones::rescale(forms);
    for (double x : r.scalings) REQUIRE(x > 0);
    for (double tt : {0.1, 1.0, 10.0}) REQUIRE(cones::nested_normal_set_check(forms, r.scalings, 0, tt));
  }
}

TEST_CASE("property: membership is invariant under positive generator rescaling") {
  auto rng = gen::rng(31);
  std::uniform_real_distribution<double> u(-1, 1), pos(0.1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Eigen::VectorXd> g, h;
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd x(3);
      for (int k = 0; k < 3; ++k) x(k) = u(rng);
      g.push_back(x);
      h.push_back(pos(rng) * x);
    }
    const cones::NormalCone a(g), b(h);
    Eigen::VectorXd pt(3);
    for (int k = 0; k < 3; ++k) pt(k) = u(rng);
    // skip points close to the boundary where the tolerance decides
    const auto lam = a.nnls_coefficients(pt);
    const double resid = (a.generators()[0] * lam(0) + a.generators()[1] * lam(1) + a.generators()[2] * lam(2) - pt).norm();
    if (resid > 1e-9 && resid < 1e-3) continue;
    REQUIRE(a.contains(pt) == b.contains(pt));
  }
}
