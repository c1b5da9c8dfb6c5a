#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "alab/bttree.hpp"
#include "alab/cli.hpp"
#include "alab/coarse.hpp"
#include "alab/cones.hpp"
#include "alab/cutproject.hpp"
#include "alab/places.hpp"
#include "alab/rootsys.hpp"

namespace alab::cli {

namespace {

struct Globals {
  std::string out;
  unsigned long long seed = 1;
  std::optional<long> depth;  // --depth / --height
};

Rational rational_arg(const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Json string_matrix_rows(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

Json string_matrix_columns(const QMatrix& m) { return string_matrix_rows(m.transpose()); }

Json vector_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number_json(v(i)));
  return arr;
}

std::string decimals(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += number_json(v(i))["decimal"].get<std::string>();
  }
  return s;
}

rootsys::RootType type_arg(const std::string& label) {
  try {
    return rootsys::RootType::parse(label);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// --- places -------------------------------------------------------------------

Result places_product_formula(const std::string& q_text) {
  const Rational q = rational_arg(q_text);
  if (q.is_zero()) throw std::domain_error("product formula needs a nonzero rational");
  Result r;
  r.payload["input"] = q.to_string();
  Json factors = Json::array();
  for (const auto& s : places::support(q))
    factors.push_back({{"place", s.label()}, {"value", places::normalized_abs(q, s).value.to_string()}});
  r.payload["places"] = factors;
  const Rational value = places::product_formula(q);
  r.payload["value"] = value.to_string();
  r.verdict = value == Rational(1) ? "pass" : "fail";
  if (*r.verdict == "fail") r.witness = "product " + value.to_string();
  return r;
}

places::Place place_arg(const std::string& at) {
  if (at == "inf" || at == "infinity") return places::Place::infinite();
  try {
    return places::Place::finite(Integer(at));
  } catch (const std::exception& e) {
    throw UsageError("--at expects a prime or 'inf', got '" + at + "'");
  }
}

Result places_abs(const std::string& q_text, const std::string& at) {
  const Rational q = rational_arg(q_text);
  const places::Place s = place_arg(at);
  Result r;
  r.payload["input"] = q.to_string();
  r.payload["place"] = s.label();
  r.payload["value"] = places::normalized_abs(q, s).value.to_string();
  return r;
}

Result places_valuation(const std::string& q_text, const std::string& p) {
  const Rational q = rational_arg(q_text);
  const places::Place s = place_arg(p);
  if (!s.is_finite()) throw UsageError("--p must be a prime");
  Result r;
  r.payload["input"] = q.to_string();
  r.payload["place"] = s.label();
  r.payload["value"] = places::valuation(q, s.prime());
  return r;
}

Result places_window(const std::string& q_text, const std::string& s_text, const std::string& c_text) {
  const Rational q = rational_arg(q_text);
  const Rational c = rational_arg(c_text);
  std::vector<Integer> S;
  for (const auto& item : split(s_text, ',')) {
    try {
      S.emplace_back(item);
    } catch (const std::exception&) {
      throw UsageError("--s expects a comma-separated list of primes");
    }
  }
  Result r;
  r.payload["input"] = q.to_string();
  Json primes = Json::array();
  for (const auto& p : S) primes.push_back(p.get_str());
  r.payload["place"] = {{"S", primes}, {"c", c.to_string()}};
  r.payload["value"] = places::s_integer_window_test(q, S, c);
  return r;
}

// --- rootsys ------------------------------------------------------------------

Result rootsys_dump(const std::string& label) {
  const auto rs = rootsys::build_root_system(type_arg(label));
  const auto cm = rootsys::coeff_matrices(rs);
  Result r;
  r.payload["type"] = rs.type.label();
  r.payload["ambient_dim"] = rs.ambient_dim;
  r.payload["simple_roots"] = string_matrix_columns(rs.simple_roots);
  r.payload["fund_weights"] = string_matrix_columns(rs.fund_weights);
  r.payload["cartan"] = string_matrix_rows(rootsys::cartan_matrix(rs));
  r.payload["c"] = string_matrix_rows(cm.c);
  r.payload["n"] = string_matrix_rows(cm.n);
  return r;
}

Json orthogonality_entry(const rootsys::RootType& t, std::vector<std::string>& failures) {
  const auto rs = rootsys::build_root_system(t);
  const auto rep = rootsys::orthogonality_check(rs);
  const auto cm = rootsys::coeff_matrices(rs);
  bool signs = true;
  for (std::size_t i = 0; i < rs.rank(); ++i)
    for (std::size_t j = 0; j < rs.rank(); ++j) {
      const Rational& x = cm.n(j, i);
      if ((i == j && x.sign() <= 0) || x.sign() < 0) {
        signs = false;
        failures.push_back(t.label() + ": n(" + std::to_string(j) + "," + std::to_string(i) + ") = " + x.to_string());
      }
    }
  for (const auto& v : rep.violations) failures.push_back(t.label() + ": " + v);
  return {{"type", t.label()},
          {"pairings", string_matrix_rows(rep.pairings)},
          {"orthogonal", rep.ok},
          {"n_signs", signs}};
}

Result rootsys_orthogonality(const std::optional<std::string>& label) {
  std::vector<rootsys::RootType> types = label ? std::vector{type_arg(*label)} : rootsys::supported_types();
  std::vector<std::string> failures;
  Result r;
  Json list = Json::array();
  for (const auto& t : types) list.push_back(orthogonality_entry(t, failures));
  r.payload["types"] = list;
  r.verdict = failures.empty() ? "pass" : "fail";
  if (!failures.empty()) r.witness = failures.front();
  return r;
}

// --- cones --------------------------------------------------------------------

Json classification_json(const cones::Classification& c) {
  return {{"type", c.type.label()},
          {"is_linear", c.is_linear},
          {"v", vector_json(c.v)},
          {"v_dot_A", vector_json(c.v_dot_roots)}};
}

Result cones_classify(const std::optional<std::string>& label, bool all) {
  Result r;
  if (all) {
    std::ostringstream csv;
    csv << "type,is_linear,v,v_dot_A\n";
    Json rows = Json::array();
    for (const auto& t : rootsys::supported_types()) {
      const auto c = cones::linear_type_classification(t);
      csv << t.label() << ',' << (c.is_linear ? "true" : "false") << ",\"" << decimals(c.v) << "\",\""
          << decimals(c.v_dot_roots) << "\"\n";
      rows.push_back(classification_json(c));
    }
    r.payload["table"] = rows;
    r.csv = csv.str();
    return r;
  }
  r.payload = classification_json(cones::linear_type_classification(type_arg(*label)));
  return r;
}

Result cones_rescale(const std::string& label) {
  const auto rs = rootsys::build_root_system(type_arg(label));
  const auto forms = cones::weight_forms(rs);
  const auto res = cones::rescale(forms);
  Result r;
  r.payload["type"] = rs.type.label();
  Json sc = Json::array();
  for (double s : res.scalings) sc.push_back(number_json(s));
  r.payload["scalings"] = sc;
  r.payload["interior_point"] = vector_json(res.interior_point);
  r.payload["perturbation_rounds"] = res.perturbation_rounds;
  Json checks = Json::array();
  bool ok = true;
  for (double t : {0.1, 1.0, 10.0}) {
    const auto chk = cones::nested_normal_set(forms, res.scalings, 0.0, t);
    ok = ok && chk.nested;
    checks.push_back({{"s", 0}, {"t", t}, {"nested", chk.nested}, {"margin", number_json(chk.margin)}});
    if (!chk.nested && !r.witness) r.witness = "not nested at t = " + number_json(t)["decimal"].get<std::string>();
  }
  r.payload["checks"] = checks;
  r.verdict = ok ? "pass" : "fail";
  return r;
}

Result cones_nested(const std::string& label, double s, double t, bool unscaled) {
  const auto rs = rootsys::build_root_system(type_arg(label));
  const auto forms = cones::weight_forms(rs);
  const std::vector<double> scalings =
      unscaled ? std::vector<double>(forms.size(), 1.0) : cones::rescale_constants(forms);
  if (!(s < t)) throw UsageError("--s must be smaller than --t");
  const auto chk = cones::nested_normal_set(forms, scalings, s, t);
  Result r;
  r.payload["type"] = rs.type.label();
  r.payload["s"] = s;
  r.payload["t"] = t;
  r.payload["scaled"] = !unscaled;
  r.payload["nested"] = chk.nested;
  r.payload["margin"] = number_json(chk.margin);
  r.verdict = chk.nested ? "pass" : "fail";
  if (!chk.nested) r.witness = "margin " + number_json(chk.margin)["decimal"].get<std::string>();
  return r;
}

Result cones_tip(const std::string& label, const std::string& point) {
  const auto rs = rootsys::build_root_system(type_arg(label));
  const auto forms = cones::weight_forms(rs);
  const auto cone = cones::tip_normal_cone(forms);
  const auto xs = parse_doubles(point);
  if (xs.size() != rs.ambient_dim)
    throw UsageError("--point needs " + std::to_string(rs.ambient_dim) + " coordinates for " + rs.type.label());
  Eigen::VectorXd x(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) x(static_cast<Eigen::Index>(i)) = xs[i];
  Result r;
  r.payload["type"] = rs.type.label();
  Json gens = Json::array();
  for (const auto& g : cone.generators()) gens.push_back(vector_json(g));
  r.payload["generators"] = gens;
  r.payload["coefficients"] = vector_json(cone.nnls_coefficients(x));
  r.payload["contains"] = cone.contains(x);
  return r;
}

// --- cutproject ---------------------------------------------------------------

struct SchemeArgs {
  std::string config;
  std::string scheme;
  std::optional<long> p;
  std::string window;
  std::string internal;
};

struct SchemeSetup {
  std::unique_ptr<cutproject::Scheme> scheme;
  long height = 5;
};

SchemeSetup scheme_setup(const SchemeArgs& a, const Globals& g) {
  Json cfg = a.config.empty() ? Json::object() : load_json(a.config);
  if (!a.scheme.empty()) cfg["scheme"] = a.scheme;
  if (a.p) cfg["p"] = *a.p;
  if (!a.window.empty()) cfg["window"] = a.window;
  if (!a.internal.empty()) cfg["internal"] = a.internal;
  SchemeSetup s;
  s.scheme = scheme_from_config(cfg);
  if (cfg.contains("height")) {
    if (!cfg["height"].is_number_integer()) throw UsageError("config field 'height' must be an integer");
    s.height = cfg["height"].get<long>();
  }
  if (g.depth) s.height = *g.depth;
  if (s.height < 0) throw UsageError("height must be nonnegative");
  return s;
}

Json scheme_json(const cutproject::Scheme& s, long height) {
  return {{"name", s.name()}, {"params", s.params()}, {"height", height}};
}

Json points_json(const std::vector<cutproject::Point>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(point_json(p));
  return arr;
}

Result cut_enumerate(const SchemeSetup& s) {
  const auto ms = cutproject::enumerate_model_set(*s.scheme, s.height);
  Result r;
  r.payload["scheme"] = scheme_json(*s.scheme, s.height);
  r.payload["count"] = ms.points.size();
  r.payload["points"] = points_json(ms.points);
  return r;
}

Result cut_certify(const SchemeSetup& s, long extended) {
  const auto ms = cutproject::enumerate_model_set(*s.scheme, s.height);
  const auto cert = cutproject::approximate_group_certificate(*s.scheme, ms, extended);
  const bool ok = cutproject::verify_certificate(*s.scheme, cert);
  Result r;
  r.payload["scheme"] = scheme_json(*s.scheme, s.height);
  r.payload["extended_height"] = cert.extended_height;
  r.payload["model_set_size"] = ms.points.size();
  r.payload["F_size"] = cert.F.size();
  r.payload["F"] = points_json(cert.F);
  Json stars = Json::array();
  double max_h = 0;
  for (const auto& f : cert.F) {
    const double h = s.scheme->h_norm(s.scheme->star(f));
    max_h = std::max(max_h, h);
    stars.push_back(number_json(h));
  }
  r.payload["F_star_norms"] = stars;
  r.payload["max_star_norm"] = number_json(max_h);
  r.payload["products"] = cert.products;
  r.payload["covered"] = cert.covered;
  r.payload["skipped"] = cert.skipped;
  r.payload["witness_count"] = cert.witnesses.size();
  const bool complete = cert.covered + cert.skipped == cert.products;
  r.verdict = ok && complete ? "pass" : "fail";
  if (!ok) r.witness = "a claimed factorization does not re-verify";
  else if (!complete) r.witness = std::to_string(cert.products - cert.covered - cert.skipped) + " products uncovered";
  return r;
}

std::vector<std::vector<cutproject::Point>> pi_samples(const cutproject::Scheme& s, std::size_t count,
                                                       std::size_t size, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<cutproject::Point>> out(count);
  for (auto& pi : out)
    for (std::size_t k = 0; k < size; ++k) pi.push_back(s.sample_g(rng));
  return out;
}

Result cut_descent(const SchemeSetup& s, double radius, std::size_t samples, std::size_t pi_size, const Globals& g) {
  const auto IK = cutproject::star_sample(*s.scheme, radius, s.height);
  const auto pis = pi_samples(*s.scheme, samples, pi_size, g.seed);
  const auto cert = cutproject::descent_sets(*s.scheme, IK, IK, pis, s.height);
  Result r;
  r.payload["scheme"] = scheme_json(*s.scheme, s.height);
  r.payload["radius"] = radius;
  r.payload["I_size"] = IK.size();
  r.payload["targets"] = cert.targets.size();
  r.payload["E"] = points_json(cert.E);
  r.payload["F"] = points_json(cert.F);
  r.payload["samples_checked"] = cert.samples_checked;
  r.payload["elements_checked"] = cert.elements_checked;
  r.payload["violations"] = cert.violations;
  r.payload["witnesses"] = cert.witnesses;
  r.verdict = cert.violations == 0 ? "pass" : "fail";
  if (!cert.witnesses.empty()) r.witness = cert.witnesses.front();
  return r;
}

Result cut_star(const SchemeSetup& s, const std::string& point) {
  const auto g = parse_point(point);
  Result r;
  r.payload["scheme"] = scheme_json(*s.scheme, s.height);
  r.payload["input"] = point_json(g);
  r.payload["star"] = point_json(cutproject::star_map(*s.scheme, g));
  return r;
}

Result cut_commensurability(const SchemeSetup& s, const SchemeArgs& a, const std::string& window2, const Globals& g) {
  SchemeArgs b = a;
  b.window = window2;
  const auto other = scheme_setup(b, g);
  const auto rep = cutproject::commensurability(*s.scheme, *other.scheme, s.height);
  Result r;
  r.payload["a"] = scheme_json(*s.scheme, s.height);
  r.payload["b"] = scheme_json(*other.scheme, s.height);
  r.payload["F_ab"] = points_json(rep.F_ab);
  r.payload["F_ba"] = points_json(rep.F_ba);
  r.payload["uncovered"] = rep.uncovered;
  r.verdict = rep.uncovered == 0 ? "pass" : "fail";
  if (rep.uncovered) r.witness = std::to_string(rep.uncovered) + " points without a translate";
  return r;
}

Result cut_density(const SchemeSetup& s, double lo, double hi) {
  const auto ms = cutproject::enumerate_model_set(*s.scheme, s.height);
  Result r;
  r.payload["scheme"] = scheme_json(*s.scheme, s.height);
  r.payload["range"] = {lo, hi};
  r.payload["max_gap"] = number_json(cutproject::relative_density_gap(*s.scheme, ms, lo, hi));
  return r;
}

// --- coarse -------------------------------------------------------------------

coarse::FiniteMetricSpace space_from_json(const Json& j) {
  try {
    if (j.is_array() || j.contains("points")) {
      const Json& pts = j.is_array() ? j : j["points"];
      return coarse::FiniteMetricSpace::euclidean(pts.get<std::vector<std::vector<double>>>());
    }
    if (j.contains("distances")) {
      const auto rows = j["distances"].get<std::vector<std::vector<double>>>();
      std::vector<double> flat;
      for (const auto& row : rows) {
        if (row.size() != rows.size()) throw UsageError("'distances' must be a square matrix");
        flat.insert(flat.end(), row.begin(), row.end());
      }
      return coarse::FiniteMetricSpace::from_matrix(rows.size(), std::move(flat));
    }
    if (j.contains("model_set")) {
      const Json& cfg = j["model_set"];
      const auto scheme = scheme_from_config(cfg);
      const long height = cfg.value("height", 3L);
      const auto ms = cutproject::enumerate_model_set(*scheme, height);
      const bool internal = j.value("metric", std::string("g")) == "h";
      return coarse::FiniteMetricSpace::from_function(ms.points.size(), [&](std::size_t a, std::size_t b) {
        return internal ? scheme->dist_h(scheme->star(ms.points[a]), scheme->star(ms.points[b]))
                        : scheme->dist_g(ms.points[a], ms.points[b]);
      });
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed space description: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("malformed space description: ") + e.what());
  }
  throw UsageError("space input needs 'points', 'distances' or 'model_set'");
}

coarse::FiniteMetricSpace space_arg(const std::string& path) {
  if (path.empty()) throw UsageError("--input is required");
  return space_from_json(load_json(path));
}

Json labels_json(const coarse::Components& c) { return c.labels; }

Result coarse_vr(const std::string& input, double r_scale, int max_dim) {
  const auto space = space_arg(input);
  if (max_dim < 0 || max_dim > 2) throw UsageError("--max-dim must be 0, 1 or 2");
  if (r_scale < 0) throw UsageError("--r must be nonnegative");
  const auto cx = coarse::vr_complex(space, r_scale, max_dim);
  const auto comps = coarse::components(space, r_scale);
  Result r;
  r.payload["scale"] = r_scale;
  r.payload["vertices"] = cx.vertices;
  r.payload["edges"] = cx.edges.size();
  r.payload["triangles"] = cx.triangles.size();
  r.payload["components"] = comps.count;
  r.payload["labels"] = labels_json(comps);
  if (max_dim == 2) {
    const auto h = coarse::h1_rank(cx);
    r.payload["h1_rank"] = h.h1;
    r.payload["rank_d1"] = h.rank_d1;
    r.payload["rank_d2"] = h.rank_d2;
  } else {
    r.payload["h1_rank"] = nullptr;
  }
  return r;
}

Result coarse_probe(const std::string& input, const std::string& schedule, bool h1) {
  const auto space = space_arg(input);
  const auto sched = schedule.empty() ? coarse::geometric_schedule(1.0, 4) : parse_doubles(schedule);
  coarse::FiltrationProbe pr;
  try {
    pr = coarse::probe(space, sched, h1);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Result r;
  Json scales = Json::array(), comps = Json::array(), h1s = Json::array(), verdicts = Json::array(),
       maps = Json::array();
  for (const auto& st : pr.stages) {
    scales.push_back(st.scale);
    comps.push_back(st.components);
    if (st.h1_rank)
      h1s.push_back(*st.h1_rank);
    else
      h1s.push_back(nullptr);
    verdicts.push_back(st.verdict);
    if (!st.map_to_next.empty()) maps.push_back(st.map_to_next);
  }
  r.payload["scale"] = scales;
  r.payload["components"] = comps;
  r.payload["h1_rank"] = h1s;
  r.payload["maps"] = maps;
  r.payload["map_verdicts"] = verdicts;
  r.payload["maps_compose"] = pr.maps_compose;
  return r;
}

Result coarse_components(const std::string& input, double r_scale, double s_scale) {
  const auto space = space_arg(input);
  if (r_scale > s_scale) throw UsageError("--r must not exceed --s");
  const auto m = coarse::component_map(space, r_scale, s_scale);
  Result r;
  r.payload["r"] = r_scale;
  r.payload["s"] = s_scale;
  r.payload["components_r"] = m.source.count;
  r.payload["components_s"] = m.target.count;
  r.payload["map"] = m.map;
  r.payload["trivial"] = m.trivial;
  r.payload["injective"] = m.injective;
  return r;
}

Result coarse_product(const std::string& a, const std::string& b, const std::string& schedule) {
  const auto sa = space_arg(a);
  const auto sb = space_arg(b);
  const auto sched = schedule.empty() ? coarse::geometric_schedule(1.0, 4) : parse_doubles(schedule);
  const auto stages = coarse::product_components(sa, sb, sched);
  Result r;
  Json arr = Json::array();
  bool ok = true;
  for (const auto& st : stages) {
    arr.push_back({{"scale", st.scale},
                   {"components", st.components},
                   {"components_a", st.components_a},
                   {"components_b", st.components_b},
                   {"bijective", st.bijective},
                   {"commutes", st.commutes}});
    if ((!st.bijective || !st.commutes) && ok) {
      ok = false;
      std::ostringstream os;
      os << "scale " << st.scale << ": " << st.components << " components vs " << st.components_a << " x "
         << st.components_b;
      r.witness = os.str();
    }
  }
  r.payload["diameters"] = {sa.diameter(), sb.diameter(), coarse::product_space(sa, sb).diameter()};
  r.payload["stages"] = arr;
  r.verdict = ok ? "pass" : "fail";
  return r;
}

Result coarse_cayley(const std::string& stages_text, const std::string& from, const std::string& to, double budget) {
  std::vector<std::vector<Rational>> stages;
  for (const auto& stage : split(stages_text, ';')) {
    std::vector<Rational> s;
    for (const auto& x : split(stage, ',')) s.push_back(rational_arg(x));
    stages.push_back(std::move(s));
  }
  const Rational g = rational_arg(from), h = rational_arg(to);
  Result r;
  r.payload["from"] = g.to_string();
  r.payload["to"] = h.to_string();
  r.payload["budget"] = budget;
  try {
    r.payload["distance"] = coarse::weighted_cayley_distance(
        stages, g, h, [](const Rational& x, const Rational& y) { return x + y; }, budget);
  } catch (const coarse::BudgetExceeded& e) {
    r.payload["distance"] = nullptr;
    r.payload["lower_bound"] = e.lower_bound();
    r.verdict = "inconclusive";
    r.witness = "budget exceeded";
  }
  return r;
}

Result coarse_interleave(const std::string& input, const std::string& filtrations, double r_scale) {
  const auto space = space_arg(input);
  const Json f = load_json(filtrations);
  coarse::Filtration a, b;
  try {
    a = f.at("a").get<coarse::Filtration>();
    b = f.at("b").get<coarse::Filtration>();
  } catch (const Json::exception& e) {
    throw UsageError(std::string("filtrations file needs 'a' and 'b' lists of index lists: ") + e.what());
  }
  for (const auto* fl : {&a, &b})
    for (const auto& set : *fl)
      for (auto i : set)
        if (i >= space.size()) throw UsageError("filtration index " + std::to_string(i) + " out of range");
  coarse::InterleaveReport rep;
  try {
    rep = coarse::filtration_equivalence_probe(space, a, b, r_scale);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Result r;
  auto shifts = [](const std::vector<std::optional<long>>& v) {
    Json arr = Json::array();
    for (const auto& x : v)
      if (x)
        arr.push_back(*x);
      else
        arr.push_back(nullptr);
    return arr;
  };
  r.payload["interleaved"] = rep.interleaved;
  r.payload["shift_ab"] = shifts(rep.shift_ab);
  r.payload["shift_ba"] = shifts(rep.shift_ba);
  r.payload["max_shift"] = rep.max_shift;
  r.payload["verdict_a"] = rep.verdict_a;
  r.payload["verdict_b"] = rep.verdict_b;
  r.payload["verdicts_match"] = rep.verdicts_match;
  return r;
}

// --- bttree -------------------------------------------------------------------

Json vertex_json(const bttree::Vertex& v) { return {{"m", v.m}, {"a", v.a.to_string()}}; }

Json matrix_json(const bttree::Mat2& m) {
  return Json::array({Json::array({m[0].to_string(), m[1].to_string()}), Json::array({m[2].to_string(), m[3].to_string()})});
}

long tree_depth(const Globals& g) { return g.depth.value_or(8); }

Result bt_busemann(long p, const std::string& g_text, std::size_t n, const Globals& g) {
  const bttree::Tree tree(p, tree_depth(g));
  const auto m = parse_matrix(g_text, p);
  std::mt19937_64 rng(g.seed);
  std::vector<bttree::Vertex> samples;
  for (std::size_t i = 0; i < n; ++i) samples.push_back(tree.random_vertex(rng));
  bttree::TransformReport rep;
  try {
    rep = tree.horofunction_transform_check(m, samples);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bttree: ") + e.what());
  }
  Result r;
  r.payload["p"] = p;
  r.payload["depth"] = tree.depth();
  r.payload["g"] = matrix_json(m);
  Json xs = Json::array();
  for (const auto& v : rep.samples) xs.push_back(bttree::to_string(v));
  r.payload["samples"] = xs;
  r.payload["shifts"] = rep.shifts;
  r.payload["constant"] = rep.constant ? Json(*rep.constant) : Json(nullptr);
  r.payload["log_chi"] = rep.log_chi;
  r.payload["c"] = rep.c ? Json(rep.c->to_string()) : Json(nullptr);
  r.payload["verdict"] = rep.verdict;
  r.verdict = rep.verdict;
  r.witness = rep.witness;
  return r;
}

Result bt_act(long p, const std::string& g_text, const std::string& v_text, const Globals& g) {
  const bttree::Tree tree(p, tree_depth(g));
  const auto m = parse_matrix(g_text, p);
  const auto v = parse_vertex(v_text);
  Result r;
  r.payload["g"] = matrix_json(m);
  r.payload["vertex"] = vertex_json(v);
  r.payload["image"] = vertex_json(tree.act(m, v));
  return r;
}

Result bt_distance(long p, const std::string& v_text, const std::string& w_text, const Globals& g) {
  const bttree::Tree tree(p, tree_depth(g));
  const auto v = parse_vertex(v_text), w = parse_vertex(w_text);
  Result r;
  r.payload["v"] = vertex_json(v);
  r.payload["w"] = vertex_json(w);
  r.payload["distance"] = tree.distance(v, w);
  return r;
}

Result bt_value(long p, const std::string& v_text, const std::string& end_text, std::optional<long> T,
                const Globals& g) {
  const bttree::Tree tree(p, tree_depth(g));
  const auto v = parse_vertex(v_text);
  const bttree::End end = end_text == "inf" ? bttree::End::infinity() : bttree::End::at(parse_p_expr(end_text, p));
  Result r;
  r.payload["vertex"] = vertex_json(v);
  r.payload["end"] = end.label();
  try {
    r.payload["value"] = T ? tree.busemann(end, v, *T) : tree.busemann(end, v);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bttree: ") + e.what());
  }
  return r;
}

Result bt_neighbors(long p, const std::string& v_text, const Globals& g) {
  const bttree::Tree tree(p, tree_depth(g));
  const auto v = parse_vertex(v_text);
  Result r;
  r.payload["vertex"] = vertex_json(v);
  Json nb = Json::array();
  for (const auto& w : tree.neighbors(v)) nb.push_back(vertex_json(w));
  r.payload["neighbors"] = nb;
  return r;
}

// --- dispatch -----------------------------------------------------------------

void emit(const Json& report, const std::optional<std::string>& csv, const Globals& g, std::ostream& out) {
  const std::string text = csv ? *csv : report.dump(2) + "\n";
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw UsageError("cannot write '" + g.out + "'");
  f << text;
}

CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& help) {
  auto* s = parent->add_subcommand(name, help);
  s->fallthrough();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Place arithmetic, model sets, root systems, cones, coarse probes and Bruhat-Tits trees", "alab"};
  Globals g;
  app.add_option("--out", g.out, "Write the report to this path instead of stdout");
  app.add_option("--seed", g.seed, "Seed for sampled verifications");
  app.add_option("--depth,--height", g.depth, "Tree depth (bttree) or truncation height (cutproject)");
  app.require_subcommand(1);

  std::string module;
  std::function<Result()> action;
  auto bind = [&](CLI::App* cmd, std::string mod, std::function<Result()> f) {
    cmd->callback([&, mod, f] {
      module = mod;
      action = f;
    });
  };

  // places
  auto* places = leaf(&app, "places", "Valuations and absolute values over Q");
  places->require_subcommand(1);
  std::string q_text, at, s_list, c_text = "1", p_text;
  auto* pf = leaf(places, "product-formula", "Product of |q|_s over all places");
  pf->add_option("q", q_text, "Nonzero rational a/b")->required();
  bind(pf, "places", [&] { return places_product_formula(q_text); });
  auto* pabs = leaf(places, "abs", "Normalized absolute value at one place");
  pabs->add_option("q", q_text)->required();
  pabs->add_option("--at", at, "Prime or 'inf'")->required();
  bind(pabs, "places", [&] { return places_abs(q_text, at); });
  auto* pval = leaf(places, "valuation", "p-adic valuation");
  pval->add_option("q", q_text)->required();
  pval->add_option("--p", p_text)->required();
  bind(pval, "places", [&] { return places_valuation(q_text, p_text); });
  auto* pwin = leaf(places, "window", "S-integrality with |q| <= c");
  pwin->add_option("q", q_text)->required();
  pwin->add_option("--s", s_list, "Comma-separated primes")->required();
  pwin->add_option("--c", c_text, "Archimedean bound");
  bind(pwin, "places", [&] { return places_window(q_text, s_list, c_text); });

  // rootsys
  auto* rootsys_cmd = leaf(&app, "rootsys", "Root systems and fundamental weights");
  rootsys_cmd->require_subcommand(1);
  std::string type_text;
  bool all = false;
  auto* rdump = leaf(rootsys_cmd, "dump", "Simple roots, weights, Cartan, c and n");
  rdump->add_option("--type", type_text)->required();
  bind(rdump, "rootsys", [&] { return rootsys_dump(type_text); });
  auto* rortho = leaf(rootsys_cmd, "orthogonality", "<alpha_i, omega_j> pairings and the signs of n");
  auto* rtype = rortho->add_option("--type", type_text);
  rortho->add_flag("--all", all)->excludes(rtype);
  bind(rortho, "rootsys", [&] {
    if (type_text.empty() && !all) throw UsageError("give --type or --all");
    return rootsys_orthogonality(type_text.empty() ? std::nullopt : std::optional(type_text));
  });

  // cones
  auto* cones_cmd = leaf(&app, "cones", "Normal cones and the nested normal set property");
  cones_cmd->require_subcommand(1);
  double s_level = 0, t_level = 1;
  bool unscaled = false;
  std::string point_text;
  auto* ccls = leaf(cones_cmd, "classify", "Solve v.W = 1 and test the signs of v.A");
  auto* ctype = ccls->add_option("--type", type_text);
  ccls->add_flag("--all", all, "CSV table over every supported type")->excludes(ctype);
  bind(ccls, "cones", [&] {
    if (type_text.empty() && !all) throw UsageError("give --type or --all");
    return cones_classify(type_text.empty() ? std::nullopt : std::optional(type_text), all);
  });
  auto* cres = leaf(cones_cmd, "rescale", "Scalings restoring the nested normal set property");
  cres->add_option("--type", type_text)->required();
  bind(cres, "cones", [&] { return cones_rescale(type_text); });
  auto* cnest = leaf(cones_cmd, "nested", "Nested normal set check between levels s < t");
  cnest->add_option("--type", type_text)->required();
  cnest->add_option("--s", s_level);
  cnest->add_option("--t", t_level);
  cnest->add_flag("--unscaled", unscaled, "Use unit scalings instead of the rescaled ones");
  bind(cnest, "cones", [&] { return cones_nested(type_text, s_level, t_level, unscaled); });
  auto* ctip = leaf(cones_cmd, "tip", "Membership in the tip normal cone");
  ctip->add_option("--type", type_text)->required();
  ctip->add_option("--point", point_text)->required();
  bind(ctip, "cones", [&] { return cones_tip(type_text, point_text); });

  // cutproject
  auto* cut = leaf(&app, "cutproject", "Model sets and their certificates");
  cut->require_subcommand(1);
  SchemeArgs sa;
  long extended = -1;
  double radius = 2, lo = -10, hi = 10;
  std::size_t samples = 100, pi_size = 3;
  std::string window2 = "2";
  auto scheme_opts = [&](CLI::App* c) {
    c->add_option("--config", sa.config, "Scheme config JSON");
    c->add_option("--scheme", sa.scheme, "zsqrt2, z-one-over-p or sl2");
    c->add_option("--p", sa.p);
    c->add_option("--window", sa.window);
    c->add_option("--internal", sa.internal, "p-adic or real (sl2)");
  };
  auto* cen = leaf(cut, "enumerate", "Model-set truncation");
  scheme_opts(cen);
  bind(cen, "cutproject", [&] { return cut_enumerate(scheme_setup(sa, g)); });
  auto* ccert = leaf(cut, "certify", "Approximate-group certificate F");
  scheme_opts(ccert);
  ccert->add_option("--extended-height", extended);
  bind(ccert, "cutproject", [&] { return cut_certify(scheme_setup(sa, g), extended); });
  auto* cdes = leaf(cut, "descent", "Descent sets E, F checked on random Pi samples");
  scheme_opts(cdes);
  cdes->add_option("--radius", radius, "I = K = star images with norm <= radius");
  cdes->add_option("--samples", samples);
  cdes->add_option("--pi-size", pi_size);
  bind(cdes, "cutproject", [&] { return cut_descent(scheme_setup(sa, g), radius, samples, pi_size, g); });
  auto* cstar = leaf(cut, "star", "Star map of a lattice point");
  scheme_opts(cstar);
  cstar->add_option("--point", point_text, "Comma-separated coordinates")->required();
  bind(cstar, "cutproject", [&] { return cut_star(scheme_setup(sa, g), point_text); });
  auto* ccom = leaf(cut, "commensurability", "Translates relating two windows");
  scheme_opts(ccom);
  ccom->add_option("--window2", window2);
  bind(ccom, "cutproject", [&] { return cut_commensurability(scheme_setup(sa, g), sa, window2, g); });
  auto* cden = leaf(cut, "density", "Largest gap of the truncation inside [lo, hi]");
  scheme_opts(cden);
  cden->add_option("--lo", lo);
  cden->add_option("--hi", hi);
  bind(cden, "cutproject", [&] { return cut_density(scheme_setup(sa, g), lo, hi); });

  // coarse
  auto* co = leaf(&app, "coarse", "Vietoris-Rips probes");
  co->require_subcommand(1);
  std::string input, schedule, input_b, filtrations, stages_text, from = "0", to;
  double r_scale = 1, s_scale = 2, budget = 20;
  int max_dim = 1;
  bool h1 = false;
  auto* cvr = leaf(co, "vr", "Vietoris-Rips complex at one scale");
  cvr->add_option("--input", input)->required();
  cvr->add_option("--r", r_scale)->required();
  cvr->add_option("--max-dim", max_dim);
  bind(cvr, "coarse", [&] { return coarse_vr(input, r_scale, max_dim); });
  auto* cprobe = leaf(co, "probe", "Components and verdicts along a schedule");
  cprobe->add_option("--input", input)->required();
  cprobe->add_option("--schedule", schedule, "Comma-separated increasing scales");
  cprobe->add_flag("--h1", h1, "Also compute H1 ranks over F2");
  bind(cprobe, "coarse", [&] { return coarse_probe(input, schedule, h1); });
  auto* ccomp = leaf(co, "components", "Component map between scales r <= s");
  ccomp->add_option("--input", input)->required();
  ccomp->add_option("--r", r_scale)->required();
  ccomp->add_option("--s", s_scale)->required();
  bind(ccomp, "coarse", [&] { return coarse_components(input, r_scale, s_scale); });
  auto* cprod = leaf(co, "product", "pi0 of a max-metric product");
  cprod->add_option("--a", input)->required();
  cprod->add_option("--b", input_b)->required();
  cprod->add_option("--schedule", schedule);
  bind(cprod, "coarse", [&] { return coarse_product(input, input_b, schedule); });
  auto* ccay = leaf(co, "cayley", "Weighted Cayley distance in (Q, +)");
  ccay->add_option("--stages", stages_text, "Generator stages 'a,b;c,d' (stage l costs l)")->required();
  ccay->add_option("--from", from);
  ccay->add_option("--to", to)->required();
  ccay->add_option("--budget", budget);
  bind(ccay, "coarse", [&] { return coarse_cayley(stages_text, from, to, budget); });
  auto* cint = leaf(co, "interleave", "Interleaving of two filtrations");
  cint->add_option("--input", input)->required();
  cint->add_option("--filtrations", filtrations)->required();
  cint->add_option("--r", r_scale);
  bind(cint, "coarse", [&] { return coarse_interleave(input, filtrations, r_scale); });

  // bttree
  auto* bt = leaf(&app, "bttree", "Bruhat-Tits tree of SL2(Q_p)");
  bt->require_subcommand(1);
  long p = 2;
  std::string g_text, v_text, w_text, end_text = "inf";
  std::optional<long> T;
  std::size_t n_samples = 50;
  auto tree_opts = [&](CLI::App* c) { c->add_option("--p", p); };
  auto* bbus = leaf(bt, "busemann", "Horofunction transformation law for an upper-triangular g");
  tree_opts(bbus);
  bbus->add_option("--g", g_text, "Matrix 'a,b;c,d'; entries may use p, 1/p, p^k")->required();
  bbus->add_option("--samples", n_samples);
  bind(bbus, "bttree", [&] { return bt_busemann(p, g_text, n_samples, g); });
  auto* bact = leaf(bt, "act", "g . v");
  tree_opts(bact);
  bact->add_option("--g", g_text)->required();
  bact->add_option("--vertex", v_text, "'m,a'")->required();
  bind(bact, "bttree", [&] { return bt_act(p, g_text, v_text, g); });
  auto* bdist = leaf(bt, "distance", "Tree distance");
  tree_opts(bdist);
  bdist->add_option("--v", v_text)->required();
  bdist->add_option("--w", w_text)->required();
  bind(bdist, "bttree", [&] { return bt_distance(p, v_text, w_text, g); });
  auto* bval = leaf(bt, "value", "Busemann function at a vertex");
  tree_opts(bval);
  bval->add_option("--vertex", v_text)->required();
  bval->add_option("--end", end_text, "'inf' or a rational xi");
  bval->add_option("--T", T);
  bind(bval, "bttree", [&] { return bt_value(p, v_text, end_text, T, g); });
  auto* bnb = leaf(bt, "neighbors", "The p + 1 neighbours of a vertex");
  tree_opts(bnb);
  bnb->add_option("--vertex", v_text)->required();
  bind(bnb, "bttree", [&] { return bt_neighbors(p, v_text, g); });

  // suite
  auto* suite = leaf(&app, "suite", "Run a config of named checks");
  std::string suite_path;
  suite->add_option("config", suite_path)->required();
  bind(suite, "suite", [&] { return run_suite(load_json(suite_path), g.seed); });

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-' && !app.get_subcommand_no_throw(args.front())) {
    err << "usage error: unknown command '" << args.front() << "'\n" << "run 'alab --help' for the command list\n";
    return 2;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'alab --help' for the command list\n";
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Result result;
  try {
    result = action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    result = Result{};
    result.payload["error"] = module + ": " + e.what();
    result.verdict = "fail";
    result.witness = module + ": " + e.what();
    err << module << ": " << e.what() << "\n";
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  Json report;
  report["schema_version"] = kReportSchema;
  report["command"] = args;
  report["timing"] = {{"elapsed_ms", ms}};
  report["payload"] = result.payload;
  if (result.verdict) report["verdict"] = *result.verdict;
  if (result.witness) report["witness"] = *result.witness;
  try {
    emit(report, result.csv, g, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  return result.verdict && *result.verdict == "fail" ? 1 : 0;
}

}  // namespace alab::cli
