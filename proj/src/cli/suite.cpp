#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "alab/bttree.hpp"
#include "alab/cli.hpp"
#include "alab/coarse.hpp"
#include "alab/cones.hpp"
#include "alab/cutproject.hpp"
#include "alab/places.hpp"
#include "alab/rootsys.hpp"

namespace alab::cli {

namespace {

struct Check {
  bool pass = true;
  Json details = Json::object();
  std::optional<std::string> witness;

  void fail(const std::string& w) {
    if (pass) witness = w;
    pass = false;
  }
};

using Runner = Check (*)(const Json&, unsigned long long);

template <class T>
T param(const Json& c, const char* key, T fallback) {
  if (!c.contains(key)) return fallback;
  try {
    return c[key].get<T>();
  } catch (const Json::exception&) {
    throw UsageError(std::string("check parameter '") + key + "' has the wrong type");
  }
}

std::vector<rootsys::RootType> types_param(const Json& c, const std::vector<std::string>& fallback) {
  std::vector<rootsys::RootType> out;
  for (const auto& s : param(c, "types", fallback)) {
    try {
      out.push_back(rootsys::RootType::parse(s));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

const std::vector<std::string> kCriterionTypes = {"A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C3",
                                                  "C4", "F4", "G2", "D4", "D5", "E6", "E7", "E8"};

Check d4_counterexample(const Json& c, unsigned long long) {
  Check out;
  const double r2 = std::sqrt(2.0);
  const double v_ref[] = {1, r2 - 1, 2 - r2, 0};
  const double va_ref[] = {2 - r2, 2 * r2 - 3, 2 - r2, 2 - r2};
  const auto cl = cones::linear_type_classification(rootsys::RootType::parse("D4"));
  for (int i = 0; i < 4; ++i) {
    if (std::fabs(cl.v(i) - v_ref[i]) > 1e-9) out.fail("v[" + std::to_string(i) + "] off");
    if (std::fabs(cl.v_dot_roots(i) - va_ref[i]) > 1e-9) out.fail("v.A[" + std::to_string(i) + "] off");
  }
  const std::string expected = param<std::string>(c, "expect_second_sign", "negative");
  const std::string actual = cl.v_dot_roots(1) < 0 ? "negative" : "nonnegative";
  if (actual != expected) out.fail("second entry of v.A is " + actual + ", expected " + expected);
  out.details["v"] = Json::array();
  out.details["v_dot_A"] = Json::array();
  for (int i = 0; i < 4; ++i) {
    out.details["v"].push_back(number_json(cl.v(i)));
    out.details["v_dot_A"].push_back(number_json(cl.v_dot_roots(i)));
  }
  return out;
}

Check classify(const Json& c, unsigned long long) {
  Check out;
  const auto types = types_param(c, kCriterionTypes);
  const Json expect = param<Json>(c, "expect", Json::object());
  for (const auto& t : types) {
    const bool linear = cones::linear_type_classification(t).is_linear;
    out.details[t.label()] = linear;
    const bool expected = expect.contains(t.label()) ? expect[t.label()].get<bool>() : t.linear_diagram();
    if (linear != expected) out.fail(t.label() + " classified " + (linear ? "linear" : "non-linear"));
  }
  return out;
}

Check rescale(const Json& c, unsigned long long) {
  Check out;
  const auto ts = param<std::vector<double>>(c, "t", {0.1, 1.0, 10.0});
  for (const auto& t : types_param(c, kCriterionTypes)) {
    const auto forms = cones::weight_forms(rootsys::build_root_system(t));
    const auto sc = cones::rescale_constants(forms);
    bool ok = true;
    for (double tt : ts) {
      if (!cones::nested_normal_set_check(forms, sc, 0.0, tt)) {
        ok = false;
        out.fail(t.label() + " not nested at t = " + std::to_string(tt));
      }
    }
    out.details[t.label()] = ok;
  }
  return out;
}

Check lemma42(const Json& c, unsigned long long) {
  Check out;
  std::vector<std::string> all;
  for (const auto& t : rootsys::supported_types()) all.push_back(t.label());
  std::size_t n = 0;
  for (const auto& t : types_param(c, all)) {
    const auto rs = rootsys::build_root_system(t);
    const auto cm = rootsys::coeff_matrices(rs);
    for (std::size_t i = 0; i < rs.rank(); ++i)
      for (std::size_t j = 0; j < rs.rank(); ++j) {
        const int sg = cm.n(j, i).sign();
        if (sg < 0 || (i == j && sg == 0)) out.fail(t.label() + " n sign at (" + std::to_string(j) + "," + std::to_string(i) + ")");
        const Rational pairing = dot(rs.root(i), rs.weight(j));
        if ((i != j && !pairing.is_zero()) || (i == j && pairing.sign() <= 0))
          out.fail(t.label() + " <alpha_" + std::to_string(i + 1) + ", omega_" + std::to_string(j + 1) + "> = " +
                   pairing.to_string());
      }
    ++n;
  }
  out.details["types"] = n;
  return out;
}

Check product_formula(const Json& c, unsigned long long seed) {
  Check out;
  const long count = param<long>(c, "count", 1000);
  const long long bound = param<long long>(c, "max", 1000000000000LL);
  std::mt19937_64 rng(param<unsigned long long>(c, "seed", seed));
  std::uniform_int_distribution<long long> d(1, bound);
  for (long i = 0; i < count; ++i) {
    const Rational q(Integer(std::to_string(d(rng) * (rng() % 2 ? 1 : -1))), Integer(std::to_string(d(rng))));
    if (places::product_formula(q) != Rational(1)) out.fail("product formula fails at " + q.to_string());
  }
  out.details["count"] = count;
  return out;
}

Check sl2_integral(const Json& c, unsigned long long) {
  Check out;
  const long height = param<long>(c, "height", 20);
  for (long p : param<std::vector<long>>(c, "primes", {2, 3, 5})) {
    const auto scheme = cutproject::make_sl2(p);
    const auto ms = cutproject::enumerate_model_set(*scheme, height);
    std::set<cutproject::Point> got(ms.points.begin(), ms.points.end());
    // integer brute force: a, b, c in [-n, n], d from ad - bc = 1 (or any d when a = 0)
    std::set<cutproject::Point> expected;
    for (long a = -height; a <= height; ++a)
      for (long b = -height; b <= height; ++b)
        for (long cc = -height; cc <= height; ++cc) {
          if (a == 0) {
            if (b * cc != -1) continue;
            for (long d = -height; d <= height; ++d) expected.insert({{a, b, cc, d}});
          } else if ((1 + b * cc) % a == 0) {
            const long d = (1 + b * cc) / a;
            if (std::labs(d) <= height) expected.insert({{a, b, cc, d}});
          }
        }
    out.details[std::to_string(p)] = ms.points.size();
    if (got != expected)
      out.fail("p = " + std::to_string(p) + ": " + std::to_string(got.size()) + " points vs " +
               std::to_string(expected.size()) + " integral matrices");
  }
  return out;
}

Check zsqrt2_certificate(const Json& c, unsigned long long) {
  Check out;
  const long height = param<long>(c, "height", 6);
  const double bound = param<double>(c, "bound", 2.0);
  const auto scheme = cutproject::make_zsqrt2();
  const auto ms = cutproject::enumerate_model_set(*scheme, height);
  std::set<cutproject::Point> pts(ms.points.begin(), ms.points.end());
  if (!pts.count(scheme->identity())) out.fail("identity missing");
  for (const auto& x : ms.points)
    if (!pts.count(scheme->inverse(x))) out.fail("inverse of " + to_string(x) + " missing");
  const auto cert = cutproject::approximate_group_certificate(*scheme, ms);
  if (!cutproject::verify_certificate(*scheme, cert)) out.fail("certificate does not re-verify");
  if (cert.covered + cert.skipped != cert.products) out.fail("uncovered products");
  double worst = 0;
  for (const auto& f : cert.F) worst = std::max(worst, scheme->h_norm(scheme->star(f)));
  if (worst > bound + 1e-9) out.fail("|tau(f)| = " + std::to_string(worst));
  out.details["model_set_size"] = ms.points.size();
  out.details["F_size"] = cert.F.size();
  out.details["max_star_norm"] = number_json(worst);
  return out;
}

Check coarse_disconnection(const Json& c, unsigned long long) {
  Check out;
  const long p = param<long>(c, "p", 5);
  const auto radii = param<std::vector<double>>(c, "radii", {1, 5, 25});
  const auto heights = param<std::vector<long>>(c, "heights", {1, 2, 3, 4, 5, 6});
  const auto scheme = cutproject::make_z_one_over_p(p, param<long>(c, "window", 1));
  for (double r : radii) {
    Json counts = Json::array();
    std::optional<std::size_t> prev;
    for (long n : heights) {
      const auto ms = cutproject::enumerate_model_set(*scheme, n);
      const auto space = coarse::FiniteMetricSpace::from_function(
          ms.points.size(), [&](std::size_t i, std::size_t j) { return scheme->dist_g(ms.points[i], ms.points[j]); });
      const std::size_t k = coarse::components(space, r).count;
      counts.push_back(k);
      if (prev && k <= *prev)
        out.fail("r = " + number_json(r)["decimal"].get<std::string>() + ": count " + std::to_string(k) +
                 " at height " + std::to_string(n) + " does not exceed " + std::to_string(*prev));
      prev = k;
    }
    out.details[number_json(r)["decimal"].get<std::string>()] = counts;
  }
  return out;
}

Check busemann_law(const Json& c, unsigned long long seed) {
  Check out;
  const long p = param<long>(c, "p", 2);
  const bttree::Tree tree(p, param<long>(c, "depth", 8));
  std::mt19937_64 rng(param<unsigned long long>(c, "seed", seed));
  std::vector<bttree::Vertex> xs;
  for (long i = 0; i < param<long>(c, "samples", 60); ++i) xs.push_back(tree.random_vertex(rng));
  const Rational P(p);
  auto shift = [&](const bttree::Mat2& g, const std::string& name) -> std::optional<long> {
    const auto rep = tree.horofunction_transform_check(g, xs);
    out.details[name] = rep.constant ? Json(*rep.constant) : Json(nullptr);
    if (rep.verdict != "pass") out.fail(name + ": " + rep.witness.value_or("inconsistent"));
    return rep.constant;
  };
  const auto d1 = shift(bttree::diag(P, P.inverse()), "diag(p,1/p)");
  const auto d2 = shift(bttree::diag(P * P, (P * P).inverse()), "diag(p^2,1/p^2)");
  const auto u1 = shift(bttree::unipotent(Rational(1)), "unipotent(1)");
  const auto u2 = shift(bttree::unipotent(P.inverse()), "unipotent(1/p)");
  const auto mixed = shift(bttree::mat_mul(bttree::diag(P, P.inverse()), bttree::unipotent(P.inverse())), "diag*unipotent");
  if (u1 != 0L || u2 != 0L) out.fail("unipotent shift is not 0");
  if (!d1 || !d2 || *d2 != 2 * *d1) out.fail("diag(p^2,1/p^2) shift is not twice diag(p,1/p)");
  if (!d1 || !u2 || !mixed || *mixed != *d1 + *u2) out.fail("shift is not additive on diag * unipotent");
  return out;
}

Check descent(const Json& c, unsigned long long seed) {
  Check out;
  const auto scheme = cutproject::make_zsqrt2();
  const long height = param<long>(c, "height", 6);
  const double radius = param<double>(c, "radius", 2.0);
  const auto IK = cutproject::star_sample(*scheme, radius, height);
  std::mt19937_64 rng(param<unsigned long long>(c, "seed", seed));
  std::vector<std::vector<cutproject::Point>> pis(param<std::size_t>(c, "samples", 100));
  for (auto& pi : pis)
    for (int k = 0; k < 3; ++k) pi.push_back(scheme->sample_g(rng));
  const auto cert = cutproject::descent_sets(*scheme, IK, IK, pis, height);
  out.details["E_size"] = cert.E.size();
  out.details["F_size"] = cert.F.size();
  out.details["samples_checked"] = cert.samples_checked;
  out.details["violations"] = cert.violations;
  if (cert.violations) out.fail(cert.witnesses.empty() ? "violations" : cert.witnesses.front());
  return out;
}

coarse::FiniteMetricSpace two_clusters(std::mt19937_64& rng, double gap) {
  std::uniform_real_distribution<double> jitter(0.0, 0.3);
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 4; ++k) pts.push_back({jitter(rng), jitter(rng)});
  for (int k = 0; k < 4; ++k) pts.push_back({gap + jitter(rng), jitter(rng)});
  return coarse::FiniteMetricSpace::euclidean(pts);
}

Check product_lemma(const Json& c, unsigned long long seed) {
  Check out;
  std::mt19937_64 rng(param<unsigned long long>(c, "seed", seed));
  const auto a = two_clusters(rng, 3.0);
  const auto b = two_clusters(rng, 6.0);
  const auto schedule = param<std::vector<double>>(c, "schedule", {0.5, 1, 2, 4, 8});
  Json stages = Json::array();
  for (const auto& st : coarse::product_components(a, b, schedule)) {
    stages.push_back({st.scale, st.components, st.components_a, st.components_b});
    if (st.components != st.components_a * st.components_b || !st.bijective)
      out.fail("scale " + std::to_string(st.scale) + ": product count mismatch");
    if (!st.commutes) out.fail("scale " + std::to_string(st.scale) + ": maps do not commute with projections");
  }
  out.details["stages"] = stages;
  return out;
}

Check functoriality(const Json& c, unsigned long long seed) {
  Check out;
  std::mt19937_64 rng(param<unsigned long long>(c, "seed", seed));
  const long instances = param<long>(c, "instances", 100);
  std::uniform_real_distribution<double> coord(0.0, 5.0);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  for (long k = 0; k < instances; ++k) {
    std::vector<std::vector<double>> pts(10 + static_cast<std::size_t>(k % 7));
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    const auto sp = coarse::FiniteMetricSpace::euclidean(pts);
    double r = scale(rng), s = scale(rng), t = scale(rng);
    if (r > s) std::swap(r, s);
    if (s > t) std::swap(s, t);
    if (r > s) std::swap(r, s);
    const auto vr_r = coarse::vr_complex(sp, r, 2), vr_s = coarse::vr_complex(sp, s, 2);
    for (const auto& e : vr_r.edges)
      if (!vr_s.has_edge(e[0], e[1])) out.fail("edge lost between scales");
    const auto rs = coarse::component_map(sp, r, s), st = coarse::component_map(sp, s, t), rt = coarse::component_map(sp, r, t);
    for (std::size_t i = 0; i < rs.map.size(); ++i)
      if (st.map[rs.map[i]] != rt.map[i]) out.fail("component maps do not compose");
    if (rs.source.count != sp.size() - coarse::h1_rank(vr_r).rank_d1) out.fail("H0 disagrees with F2 rank");
  }
  const bttree::Tree tree(2, 8);
  for (long k = 0; k < instances; ++k) {
    const auto x = tree.random_vertex(rng);
    const long T = tree.distance(tree.origin(), x) + 3;
    const long b0 = tree.busemann(bttree::End::infinity(), x, T);
    if (tree.busemann(bttree::End::infinity(), x, T + 1) != b0 || tree.busemann(bttree::End::infinity(), x, T + 2) != b0)
      out.fail("busemann value moves past the bound at " + bttree::to_string(x));
  }
  out.details["instances"] = instances;
  return out;
}

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r = {
      {"d4-counterexample", d4_counterexample}, {"classify", classify},
      {"rescale", rescale},                     {"lemma42", lemma42},
      {"product-formula", product_formula},     {"sl2-integral", sl2_integral},
      {"zsqrt2-certificate", zsqrt2_certificate}, {"coarse-disconnection", coarse_disconnection},
      {"busemann", busemann_law},               {"descent", descent},
      {"product-lemma", product_lemma},         {"functoriality", functoriality},
  };
  return r;
}

}  // namespace

Result run_suite(const Json& config, unsigned long long seed) {
  if (!config.is_object()) throw UsageError("suite config must be a JSON object");
  if (config.contains("schema") && config["schema"] != kConfigSchema)
    throw UsageError(std::string("unsupported config schema, expected ") + kConfigSchema);
  const Json checks = config.value("checks", Json::array());
  if (!checks.is_array()) throw UsageError("'checks' must be an array");
  for (const auto& c : checks) {
    if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string())
      throw UsageError("every check needs a 'kind' string");
    if (!registry().count(c["kind"].get<std::string>()))
      throw UsageError("unknown check kind '" + c["kind"].get<std::string>() + "'");
  }

  Result r;
  Json results = Json::array();
  std::size_t passed = 0, failed = 0;
  for (const auto& c : checks) {
    const std::string kind = c["kind"];
    const std::string name = c.value("name", kind);
    const auto start = std::chrono::steady_clock::now();
    Check out;
    try {
      out = registry().at(kind)(c, seed);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      out.fail(kind + ": " + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (c.contains("max_seconds") && ms > 1000.0 * c["max_seconds"].get<double>())
      out.fail("took " + std::to_string(ms / 1000.0) + " s");
    Json entry = {{"name", name}, {"kind", kind}, {"verdict", out.pass ? "pass" : "fail"}, {"details", out.details}};
    if (out.witness) entry["witness"] = *out.witness;
    results.push_back(entry);
    (out.pass ? passed : failed) += 1;
    if (!out.pass && !r.witness) r.witness = name + ": " + *out.witness;
  }
  r.payload["checks"] = results;
  r.payload["passed"] = passed;
  r.payload["failed"] = failed;
  r.verdict = failed == 0 ? "pass" : "fail";
  return r;
}

}  // namespace alab::cli
