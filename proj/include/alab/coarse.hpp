#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace alab::coarse {

/// Finite metric space stored as a dense symmetric distance matrix.
class FiniteMetricSpace {
public:
  FiniteMetricSpace() = default;

  static FiniteMetricSpace from_function(std::size_t n, const std::function<double(std::size_t, std::size_t)>& d);
  static FiniteMetricSpace euclidean(const std::vector<std::vector<double>>& points);
  /// Row-major n x n matrix; must be symmetric with zero diagonal.
  static FiniteMetricSpace from_matrix(std::size_t n, std::vector<double> dist);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double diameter() const;

  /// Checks d(x,x) = 0, symmetry and nonnegativity exhaustively and the
  /// triangle inequality on `triples` random triples. Returns a description of
  /// the first violation.
  std::optional<std::string> check_axioms(std::mt19937_64& rng, std::size_t triples = 1000, double tol = 1e-9) const;

private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Max metric on A x B; point (i, j) has index i * |B| + j.
FiniteMetricSpace product_space(const FiniteMetricSpace& a, const FiniteMetricSpace& b);

/// Sub-space on the listed points, in the given order.
FiniteMetricSpace subspace(const FiniteMetricSpace& space, const std::vector<std::size_t>& points);

class UnionFind {
public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t count() const { return count_; }

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
  std::size_t count_;
};

struct VRComplex {
  double scale = 0;
  int max_dim = 0;
  std::size_t vertices = 0;
  std::vector<std::array<std::size_t, 2>> edges;      // i < j, lexicographic
  std::vector<std::array<std::size_t, 3>> triangles;  // i < j < k, lexicographic

  bool has_edge(std::size_t i, std::size_t j) const;
};

/// Simplices up to dimension max_dim (0, 1 or 2) with pairwise distances <= r.
VRComplex vr_complex(const FiniteMetricSpace& space, double r, int max_dim);

/// Component labels numbered by first appearance (vertex 0 gets label 0).
struct Components {
  double scale = 0;
  std::size_t count = 0;
  std::vector<std::size_t> labels;
};

Components components(const FiniteMetricSpace& space, double r);

struct ComponentMap {
  Components source;
  Components target;
  std::vector<std::size_t> map;  // source label -> target label
  bool trivial = false;          // constant
  bool injective = false;
};

/// pi0(VR_r) -> pi0(VR_s) induced by inclusion; r <= s.
ComponentMap component_map(const FiniteMetricSpace& space, double r, double s);

struct H1Rank {
  std::size_t rank_d1 = 0;
  std::size_t rank_d2 = 0;
  std::size_t h1 = 0;  // edges - rank d1 - rank d2
};

/// F2 homology rank in degree 1. Requires max_dim == 2.
H1Rank h1_rank(const VRComplex& complex);

/// Rank over F2 of a sparse 0/1 matrix given by columns of row indices.
std::size_t f2_rank(std::vector<std::vector<std::size_t>> columns);

/// Geometric schedule r0 * 2^k, k = 0..steps-1.
std::vector<double> geometric_schedule(double r0, std::size_t steps);

struct ProbeStage {
  double scale = 0;
  std::size_t components = 0;
  std::optional<std::size_t> h1_rank;
  std::vector<std::size_t> map_to_next;  // empty for the last stage
  std::string verdict;                   // "trivial up to scale R" or "persistent obstruction"
};

struct FiltrationProbe {
  std::vector<ProbeStage> stages;
  bool maps_compose = true;
};

/// Component counts, optional H1 ranks and pi0 verdicts along an increasing
/// schedule. A stage is "trivial up to scale R" when its components all merge
/// by scale R of the schedule.
FiltrationProbe probe(const FiniteMetricSpace& space, const std::vector<double>& schedule, bool with_h1 = false);

struct ProductStage {
  double scale = 0;
  std::size_t components = 0;
  std::size_t components_a = 0;
  std::size_t components_b = 0;
  bool bijective = false;  // pi0(A x B) -> pi0(A) x pi0(B)
  bool commutes = true;    // with the next stage's component maps
};

/// Compares pi0 of VR(A x B) with pi0(VR A) x pi0(VR B) along the schedule.
std::vector<ProductStage> product_components(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                                             const std::vector<double>& schedule);

using Filtration = std::vector<std::vector<std::size_t>>;  // ascending subsets of point indices

struct InterleaveReport {
  bool interleaved = false;
  std::vector<std::optional<long>> shift_ab;  // smallest j with A_i in B_j, minus i
  std::vector<std::optional<long>> shift_ba;
  long max_shift = 0;
  std::vector<std::string> verdict_a;  // per index pi0 verdicts at VR scale r
  std::vector<std::string> verdict_b;
  bool trivial_a = false;
  bool trivial_b = false;
  bool verdicts_match = false;
};

InterleaveReport filtration_equivalence_probe(const FiniteMetricSpace& space, const Filtration& a,
                                              const Filtration& b, double r);

class BudgetExceeded : public std::runtime_error {
public:
  explicit BudgetExceeded(double lower_bound)
      : std::runtime_error("budget exceeded"), lower_bound_(lower_bound) {}
  double lower_bound() const { return lower_bound_; }

private:
  double lower_bound_;
};

/// Shortest path from g to h in the weighted Cayley graph: a step x -> x*s
/// costs the first stage index l (1-based) with s in S_l. Paths longer than
/// `budget` are not explored; max_nodes bounds the search.
template <class T, class Compose>
double weighted_cayley_distance(const std::vector<std::vector<T>>& stages, const T& g, const T& h, Compose compose,
                                double budget, std::size_t max_nodes = 1'000'000) {
  if (g == h) return 0;
  std::map<T, double> cost;
  for (std::size_t l = 0; l < stages.size(); ++l)
    for (const T& s : stages[l]) cost.try_emplace(s, static_cast<double>(l + 1));

  std::map<T, double> dist{{g, 0.0}};
  using Item = std::pair<double, T>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  queue.emplace(0.0, g);
  double beyond = std::numeric_limits<double>::infinity();
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (d > dist[x]) continue;
    if (x == h) return d;
    for (const auto& [s, c] : cost) {
      const double nd = d + c;
      if (nd > budget) {
        beyond = std::min(beyond, nd);
        continue;
      }
      T y = compose(x, s);
      auto it = dist.find(y);
      if (it == dist.end()) {
        if (dist.size() >= max_nodes) throw BudgetExceeded(d);
        dist.emplace(y, nd);
        queue.emplace(nd, std::move(y));
      } else if (nd < it->second) {
        it->second = nd;
        queue.emplace(nd, std::move(y));
      }
    }
  }
  throw BudgetExceeded(std::isinf(beyond) ? budget : beyond);
}

}  // namespace alab::coarse
