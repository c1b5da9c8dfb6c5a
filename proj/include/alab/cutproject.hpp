#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "alab/rational.hpp"

namespace alab::cutproject {

/// A point of G or H in the scheme's canonical rational coordinates:
///   zsqrt2        (a, b)        for a + b*sqrt2
///   z-one-over-p  (q)
///   sl2           (a, b, c, d)  for the matrix [[a, b], [c, d]]
/// Ordering is lexicographic in the coordinates.
struct Point {
  std::vector<Rational> c;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

std::string to_string(const Point& p);

/// A generalized cut-and-project scheme (G, H, Gamma) with a window W in H.
/// G and H share the coordinate group law, so compose/inverse/identity serve
/// both sides and the star map is a homomorphism in coordinates.
/// Implementations are immutable.
class Scheme {
public:
  virtual ~Scheme() = default;

  virtual std::string name() const = 0;
  /// Human-readable parameters, e.g. "p=5, window=[-1,1]".
  virtual std::string params() const = 0;

  virtual Point identity() const = 0;
  virtual Point compose(const Point& x, const Point& y) const = 0;
  virtual Point inverse(const Point& x) const = 0;

  /// Is g the G-component of a point of Gamma?
  virtual bool is_lattice_point(const Point& g) const = 0;
  /// H-component paired with a lattice point g (not checked).
  virtual Point star(const Point& g) const = 0;
  /// G-component paired with h, when h is in the projection of Gamma to H.
  virtual std::optional<Point> star_inverse(const Point& h) const = 0;
  /// Truncation parameter of a lattice point; throws for non-lattice points.
  virtual long height(const Point& g) const = 0;

  virtual bool in_window(const Point& h) const = 0;
  /// A predicate containing W * W (used to bound certificate elements).
  virtual bool in_window_square(const Point& h) const = 0;

  virtual double dist_g(const Point& x, const Point& y) const = 0;
  virtual double dist_h(const Point& x, const Point& y) const = 0;

  /// Visits every lattice point of height <= n in canonical order.
  virtual void enumerate_lattice(long n, const std::function<void(const Point&)>& visit) const = 0;

  /// A random element of G (lattice and non-lattice points alike).
  virtual Point sample_g(std::mt19937_64& rng) const = 0;

  /// Real coordinate of g when G is the real line.
  virtual std::optional<double> g_real(const Point&) const { return std::nullopt; }

  double h_norm(const Point& h) const { return dist_h(h, identity()); }
  bool in_model_set(const Point& g) const { return is_lattice_point(g) && in_window(star(g)); }
};

/// Z[sqrt2] in R x R via Galois conjugation; window [-c, c].
std::unique_ptr<Scheme> make_zsqrt2(const Rational& c = 1);

/// Z[1/p] in Q_p x R (the infinite place killed); window [-c, c] in R.
std::unique_ptr<Scheme> make_z_one_over_p(long p, const Rational& c = 1);

enum class InternalSide { PAdic, Real };

/// SL2(Z[1/p]) in SL2(R) x SL2(Q_p); `internal` selects H. The window bounds
/// every entry's absolute value in H by c (c = 1 on the p-adic side is the
/// compact open subgroup SL2(Z_p)).
std::unique_ptr<Scheme> make_sl2(long p, InternalSide internal = InternalSide::PAdic, const Rational& c = 1);

/// tau = pi_H o (pi_G restricted to Gamma)^-1. Throws std::invalid_argument
/// when g is not a lattice point.
Point star_map(const Scheme& scheme, const Point& g);

struct ModelSetTruncation {
  long height = 0;
  std::vector<Point> points;  // canonical order
};

/// Lattice points of height <= n whose star image lies in the window.
ModelSetTruncation enumerate_model_set(const Scheme& scheme, long n);

struct Factorization {
  Point left;     // lambda_1
  Point right;    // lambda_2
  Point product;  // lambda_1 * lambda_2
  Point lambda;   // model-set factor
  Point f;        // certificate element, product = lambda * f
};

struct ApproxGroupCertificate {
  std::vector<Point> F;
  std::vector<Factorization> witnesses;
  long extended_height = 0;
  std::size_t products = 0;  // distinct products
  std::size_t covered = 0;
  std::size_t skipped = 0;   // products above extended_height
};

/// Greedy F with Lambda^2 within Lambda_ext * F, where Lambda_ext is the model set cut at
/// `extended_height` (default 2n). Candidates f = lambda^-1 x are restricted
/// to star(f) in W*W; ties go to the identity, then to the lexicographically
/// smallest candidate.
ApproxGroupCertificate approximate_group_certificate(const Scheme& scheme, const ModelSetTruncation& lambda,
                                                     long extended_height = -1);

/// Is every claimed factorization product = lambda * f with lambda in the model set?
bool verify_certificate(const Scheme& scheme, const ApproxGroupCertificate& cert);

struct DescentCertificate {
  std::vector<Point> targets;  // I * K^-1
  std::vector<Point> E;
  std::vector<Point> F;
  long height = 0;
  std::size_t samples_checked = 0;
  std::size_t elements_checked = 0;
  std::size_t violations = 0;
  std::vector<std::string> witnesses;
};

/// F covers I*K^-1 by right translates W*tau(f), E by left translates
/// tau(e)*W, both chosen greedily from lattice points of height <= `height`.
/// Each Pi sample is then checked: every g = gamma*pi with tau(gamma) in
/// I*K^-1 must lie in Lambda*F*Pi and in E*Lambda*Pi. Throws
/// std::runtime_error("increase height bound") when the cover fails.
DescentCertificate descent_sets(const Scheme& scheme, std::span<const Point> I, std::span<const Point> K,
                                std::span<const std::vector<Point>> pi_samples, long height);

/// H-points tau(gamma) with |tau(gamma)|_H <= radius over lattice points of
/// height <= n.
std::vector<Point> star_sample(const Scheme& scheme, double radius, long n);

struct CommensurabilityReport {
  std::vector<Point> F_ab;  // Lambda_a within Lambda_b * F_ab
  std::vector<Point> F_ba;  // Lambda_b within Lambda_a * F_ba
  std::size_t uncovered = 0;
};

/// Finite translate sets relating two model sets of the same lattice,
/// checked on their height-n truncations.
CommensurabilityReport commensurability(const Scheme& a, const Scheme& b, long n);

/// Largest gap between consecutive points of the truncation within [lo, hi]
/// (boundary gaps included). Requires a real G.
double relative_density_gap(const Scheme& scheme, const ModelSetTruncation& lambda, double lo, double hi);

}  // namespace alab::cutproject
