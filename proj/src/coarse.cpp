#include "alab/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

namespace alab::coarse {

FiniteMetricSpace FiniteMetricSpace::from_function(std::size_t n,
                                                   const std::function<double(std::size_t, std::size_t)>& d) {
  FiniteMetricSpace s;
  s.n_ = n;
  s.d_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s.d_[i * n + j] = s.d_[j * n + i] = d(i, j);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::euclidean(const std::vector<std::vector<double>>& points) {
  for (const auto& p : points)
    if (p.size() != points.front().size()) throw std::invalid_argument("points of mixed dimension");
  return from_function(points.size(), [&](std::size_t i, std::size_t j) {
    double s = 0;
    for (std::size_t k = 0; k < points[i].size(); ++k) s += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
    return std::sqrt(s);
  });
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::size_t n, std::vector<double> dist) {
  if (dist.size() != n * n) throw std::invalid_argument("distance matrix must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i * n + i] != 0) throw std::invalid_argument("nonzero diagonal entry");
    for (std::size_t j = 0; j < i; ++j) {
      if (dist[i * n + j] != dist[j * n + i]) throw std::invalid_argument("asymmetric distance matrix");
      if (dist[i * n + j] < 0) throw std::invalid_argument("negative distance");
    }
  }
  FiniteMetricSpace s;
  s.n_ = n;
  s.d_ = std::move(dist);
  return s;
}

double FiniteMetricSpace::diameter() const {
  return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

std::optional<std::string> FiniteMetricSpace::check_axioms(std::mt19937_64& rng, std::size_t triples,
                                                           double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0) return "d(" + std::to_string(i) + "," + std::to_string(i) + ") != 0";
    for (std::size_t j = 0; j < i; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return "asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if ((*this)(i, j) < 0) return "negative at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  }
  if (n_ == 0) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
  for (std::size_t t = 0; t < triples; ++t) {
    std::size_t x = pick(rng), y = pick(rng), z = pick(rng);
    if ((*this)(x, z) > (*this)(x, y) + (*this)(y, z) + tol) {
      std::ostringstream os;
      os << "triangle inequality fails at (" << x << "," << y << "," << z << ")";
      return os.str();
    }
  }
  return std::nullopt;
}

FiniteMetricSpace product_space(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  const std::size_t nb = b.size();
  return FiniteMetricSpace::from_function(a.size() * nb, [&](std::size_t x, std::size_t y) {
    return std::max(a(x / nb, y / nb), b(x % nb, y % nb));
  });
}

FiniteMetricSpace subspace(const FiniteMetricSpace& space, const std::vector<std::size_t>& points) {
  for (std::size_t p : points)
    if (p >= space.size()) throw std::out_of_range("subspace index out of range");
  return FiniteMetricSpace::from_function(points.size(),
                                          [&](std::size_t i, std::size_t j) { return space(points[i], points[j]); });
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), count_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --count_;
  return true;
}

bool VRComplex::has_edge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::array<std::size_t, 2>{i, j});
}

VRComplex vr_complex(const FiniteMetricSpace& space, double r, int max_dim) {
  if (!(r >= 0)) throw std::invalid_argument("scale must be nonnegative");
  if (max_dim < 0 || max_dim > 2) throw std::invalid_argument("max_dim must be 0, 1 or 2");
  VRComplex c;
  c.scale = r;
  c.max_dim = max_dim;
  c.vertices = space.size();
  if (max_dim == 0) return c;
  const std::size_t n = space.size();
  std::vector<std::vector<std::size_t>> up(n);  // neighbours j > i
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (space(i, j) <= r) {
        c.edges.push_back({i, j});
        up[i].push_back(j);
      }
  if (max_dim == 1) return c;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < up[i].size(); ++a)
      for (std::size_t b = a + 1; b < up[i].size(); ++b)
        if (space(up[i][a], up[i][b]) <= r) c.triangles.push_back({i, up[i][a], up[i][b]});
  return c;
}

Components components(const FiniteMetricSpace& space, double r) {
  const std::size_t n = space.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (space(i, j) <= r) uf.unite(i, j);
  Components out;
  out.scale = r;
  out.labels.assign(n, 0);
  std::map<std::size_t, std::size_t> label_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = label_of_root.try_emplace(uf.find(i), label_of_root.size());
    out.labels[i] = it->second;
  }
  out.count = label_of_root.size();
  return out;
}

namespace {

ComponentMap induced(Components src, Components dst) {
  ComponentMap m;
  m.map.assign(src.count, 0);
  for (std::size_t v = 0; v < src.labels.size(); ++v) m.map[src.labels[v]] = dst.labels[v];
  std::set<std::size_t> image(m.map.begin(), m.map.end());
  m.trivial = image.size() <= 1;
  m.injective = image.size() == m.map.size();
  m.source = std::move(src);
  m.target = std::move(dst);
  return m;
}

std::string format_scale(double r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace

ComponentMap component_map(const FiniteMetricSpace& space, double r, double s) {
  if (r > s) throw std::invalid_argument("component_map needs r <= s");
  return induced(components(space, r), components(space, s));
}

std::size_t f2_rank(std::vector<std::vector<std::size_t>> columns) {
  // Column reduction with pivots at the largest row index.
  std::map<std::size_t, std::size_t> pivot;  // row -> column
  std::size_t rank = 0;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    auto& col = columns[j];
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      auto it = pivot.find(col.back());
      if (it == pivot.end()) break;
      const auto& other = columns[it->second];
      std::vector<std::size_t> sum;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(sum));
      col = std::move(sum);
    }
    if (!col.empty()) {
      pivot.emplace(col.back(), j);
      ++rank;
    }
  }
  return rank;
}

H1Rank h1_rank(const VRComplex& complex) {
  if (complex.max_dim != 2) throw std::invalid_argument("h1_rank needs a complex with max_dim = 2");
  std::vector<std::vector<std::size_t>> d1;
  d1.reserve(complex.edges.size());
  for (const auto& e : complex.edges) d1.push_back({e[0], e[1]});

  auto edge_index = [&](std::size_t i, std::size_t j) {
    auto it = std::lower_bound(complex.edges.begin(), complex.edges.end(), std::array<std::size_t, 2>{i, j});
    return static_cast<std::size_t>(it - complex.edges.begin());
  };
  std::vector<std::vector<std::size_t>> d2;
  d2.reserve(complex.triangles.size());
  for (const auto& t : complex.triangles)
    d2.push_back({edge_index(t[0], t[1]), edge_index(t[0], t[2]), edge_index(t[1], t[2])});

  H1Rank out;
  out.rank_d1 = f2_rank(std::move(d1));
  out.rank_d2 = f2_rank(std::move(d2));
  out.h1 = complex.edges.size() - out.rank_d1 - out.rank_d2;
  return out;
}

std::vector<double> geometric_schedule(double r0, std::size_t steps) {
  if (!(r0 > 0)) throw std::invalid_argument("schedule base must be positive");
  std::vector<double> out;
  for (std::size_t k = 0; k < steps; ++k) out.push_back(std::ldexp(r0, static_cast<int>(k)));
  return out;
}

FiltrationProbe probe(const FiniteMetricSpace& space, const std::vector<double>& schedule, bool with_h1) {
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i - 1] < schedule[i])) throw std::invalid_argument("schedule must be strictly increasing");
  FiltrationProbe out;
  std::vector<Components> comps;
  for (double r : schedule) comps.push_back(components(space, r));
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    ProbeStage st;
    st.scale = schedule[i];
    st.components = comps[i].count;
    if (with_h1) st.h1_rank = h1_rank(vr_complex(space, schedule[i], 2)).h1;
    if (i + 1 < schedule.size()) st.map_to_next = induced(comps[i], comps[i + 1]).map;
    st.verdict = "persistent obstruction";
    for (std::size_t j = i; j < schedule.size(); ++j) {
      if (induced(comps[i], comps[j]).trivial) {
        st.verdict = "trivial up to scale " + format_scale(schedule[j]);
        break;
      }
    }
    out.stages.push_back(std::move(st));
  }
  // map(i, i+2) = map(i+1, i+2) o map(i, i+1)
  for (std::size_t i = 0; i + 2 < schedule.size(); ++i) {
    const auto direct = induced(comps[i], comps[i + 2]).map;
    for (std::size_t c = 0; c < direct.size(); ++c)
      if (out.stages[i + 1].map_to_next[out.stages[i].map_to_next[c]] != direct[c]) out.maps_compose = false;
  }
  return out;
}

std::vector<ProductStage> product_components(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                                             const std::vector<double>& schedule) {
  const FiniteMetricSpace ab = product_space(a, b);
  const std::size_t nb = b.size();
  std::vector<ProductStage> out;
  std::vector<Components> ca, cb, cab;
  for (double r : schedule) {
    ca.push_back(components(a, r));
    cb.push_back(components(b, r));
    cab.push_back(components(ab, r));
  }
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    ProductStage st;
    st.scale = schedule[k];
    st.components = cab[k].count;
    st.components_a = ca[k].count;
    st.components_b = cb[k].count;
    // projection of a product component to the pair of factor components
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> proj;
    bool well_defined = true;
    for (std::size_t v = 0; v < ab.size(); ++v) {
      std::pair<std::size_t, std::size_t> pr{ca[k].labels[v / nb], cb[k].labels[v % nb]};
      auto [it, fresh] = proj.try_emplace(cab[k].labels[v], pr);
      if (!fresh && it->second != pr) well_defined = false;
    }
    std::set<std::pair<std::size_t, std::size_t>> image;
    for (const auto& [c, pr] : proj) image.insert(pr);
    st.bijective = well_defined && image.size() == proj.size() && image.size() == ca[k].count * cb[k].count;
    if (k + 1 < schedule.size()) {
      const auto mab = induced(cab[k], cab[k + 1]).map;
      const auto ma = induced(ca[k], ca[k + 1]).map;
      const auto mb = induced(cb[k], cb[k + 1]).map;
      for (std::size_t v = 0; v < ab.size(); ++v) {
        const std::size_t c_next = mab[cab[k].labels[v]];
        // projection after the map vs map after the projection, checked on the vertex v
        const std::size_t ia = v / nb, ib = v % nb;
        const bool agree = ca[k + 1].labels[ia] == ma[ca[k].labels[ia]] && cb[k + 1].labels[ib] == mb[cb[k].labels[ib]];
        const bool lands = cab[k + 1].labels[v] == c_next;
        if (!agree || !lands) st.commutes = false;
      }
    }
    out.push_back(st);
  }
  return out;
}

namespace {

bool subset_of(const std::vector<std::size_t>& small, const std::set<std::size_t>& big) {
  return std::all_of(small.begin(), small.end(), [&](std::size_t x) { return big.count(x) > 0; });
}

std::vector<std::optional<long>> shifts(const Filtration& from, const Filtration& into) {
  std::vector<std::set<std::size_t>> sets;
  for (const auto& s : into) sets.emplace_back(s.begin(), s.end());
  std::vector<std::optional<long>> out;
  for (std::size_t i = 0; i < from.size(); ++i) {
    std::optional<long> found;
    for (std::size_t j = 0; j < sets.size() && !found; ++j)
      if (subset_of(from[i], sets[j])) found = static_cast<long>(j) - static_cast<long>(i);
    out.push_back(found);
  }
  return out;
}

// Stage i is trivial when pi0(VR_r A_i) -> pi0(VR_r A_k) is constant for some k >= i.
std::vector<std::string> stage_verdicts(const FiniteMetricSpace& space, const Filtration& f, double r) {
  std::vector<Components> comps;
  for (const auto& s : f) comps.push_back(components(subspace(space, s), r));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::string verdict = "persistent obstruction";
    for (std::size_t k = i; k < f.size(); ++k) {
      std::set<std::size_t> image;
      bool contained = true;
      for (std::size_t p : f[i]) {
        auto it = std::find(f[k].begin(), f[k].end(), p);
        if (it == f[k].end()) {
          contained = false;
          break;
        }
        image.insert(comps[k].labels[static_cast<std::size_t>(it - f[k].begin())]);
      }
      if (contained && image.size() <= 1) {
        verdict = "trivial up to index " + std::to_string(k);
        break;
      }
    }
    out.push_back(verdict);
  }
  return out;
}

}  // namespace

InterleaveReport filtration_equivalence_probe(const FiniteMetricSpace& space, const Filtration& a,
                                              const Filtration& b, double r) {
  auto ascending = [](const Filtration& f) {
    for (std::size_t i = 1; i < f.size(); ++i) {
      std::set<std::size_t> big(f[i].begin(), f[i].end());
      if (!subset_of(f[i - 1], big)) return false;
    }
    return true;
  };
  if (!ascending(a) || !ascending(b)) throw std::invalid_argument("filtrations must be ascending");
  InterleaveReport rep;
  rep.shift_ab = shifts(a, b);
  rep.shift_ba = shifts(b, a);
  rep.interleaved = true;
  for (const auto* sh : {&rep.shift_ab, &rep.shift_ba})
    for (const auto& x : *sh) {
      if (!x)
        rep.interleaved = false;
      else
        rep.max_shift = std::max(rep.max_shift, std::abs(*x));
    }
  rep.verdict_a = stage_verdicts(space, a, r);
  rep.verdict_b = stage_verdicts(space, b, r);
  auto all_trivial = [](const std::vector<std::string>& v) {
    return std::all_of(v.begin(), v.end(), [](const std::string& s) { return s != "persistent obstruction"; });
  };
  rep.trivial_a = all_trivial(rep.verdict_a);
  rep.trivial_b = all_trivial(rep.verdict_b);
  rep.verdicts_match = rep.trivial_a == rep.trivial_b;
  return rep;
}

}  // namespace alab::coarse
