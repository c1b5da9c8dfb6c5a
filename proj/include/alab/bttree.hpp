#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "alab/rational.hpp"

namespace alab::bttree {

/// 2x2 rational matrix, row-major (a, b, c, d) for [[a, b], [c, d]].
using Mat2 = std::array<Rational, 4>;

Mat2 mat_mul(const Mat2& x, const Mat2& y);
Rational det(const Mat2& x);
Mat2 diag(const Rational& a, const Rational& d);
Mat2 unipotent(const Rational& x);  // [[1, x], [0, 1]]

/// Homothety class of the Z_p-lattice spanned by the columns of
/// [[p^m, a], [0, 1]], with a in Z[1/p] and 0 <= a < p^m. The base vertex o
/// is (0, 0).
struct Vertex {
  long m = 0;
  Rational a;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

std::string to_string(const Vertex& v);

/// A boundary point: the end fixed by the upper-triangular Borel, or the end
/// at xi in Q (the line through (xi, 1)).
struct End {
  std::optional<Rational> xi;  // nullopt is the end at infinity

  static End infinity() { return {}; }
  static End at(const Rational& x) { return {x}; }
  std::string label() const { return xi ? xi->to_string() : "inf"; }
};

struct TransformReport {
  std::vector<Vertex> samples;
  std::vector<long> shifts;          // beta(g.x) - beta(x), per sample
  std::optional<long> constant;      // common shift when consistent
  long log_chi = 0;                  // log_p |a^2|_p for g = diag(a, 1/a) * unipotent
  std::optional<Rational> c;         // shift / log_chi when log_chi != 0
  std::string verdict;               // "pass" or "fail"
  std::optional<std::string> witness;
};

/// The Bruhat-Tits tree of SL2(Q_p). `depth` bounds sampling and the distance
/// from o of every vertex handed out; larger vertices raise
/// std::runtime_error("increase depth").
class Tree {
public:
  explicit Tree(long p, long depth = 8);

  long p() const { return p_; }
  long depth() const { return depth_; }
  Vertex origin() const { return {}; }

  /// Canonical vertex of the lattice spanned by the columns of `basis`.
  Vertex from_basis(const Mat2& basis) const;
  Mat2 basis(const Vertex& v) const;

  /// g . v for invertible g.
  Vertex act(const Mat2& g, const Vertex& v) const;
  long distance(const Vertex& v, const Vertex& w) const;
  /// The p + 1 vertices at distance 1.
  std::vector<Vertex> neighbors(const Vertex& v) const;

  /// Geodesic ray from o toward `end`, at time t >= 0.
  Vertex ray(const End& end, long t) const;

  /// d(rho(T), o) - d(rho(T), x). Throws std::invalid_argument unless
  /// T > d(o, x) + 2, past which the value no longer depends on T.
  long busemann(const End& end, const Vertex& x, long T) const;
  /// Same, with T = d(o, x) + 3.
  long busemann(const End& end, const Vertex& x) const;

  /// Endpoint of a random non-backtracking walk from o of length in [0, depth].
  Vertex random_vertex(std::mt19937_64& rng) const;

  /// beta_inf(g.x) - beta_inf(x) over the samples, compared with
  /// log_p |chi(g)|_p for the root character chi(diag(a, 1/a)) = a^2.
  /// g must be upper triangular with det 1.
  TransformReport horofunction_transform_check(const Mat2& g, const std::vector<Vertex>& samples) const;

private:
  void check_depth(const Vertex& v) const;

  long p_;
  long depth_;
  Integer pz_;
};

}  // namespace alab::bttree
