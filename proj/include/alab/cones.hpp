#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "alab/rootsys.hpp"

namespace alab::cones {

/// Strict-inequality margin for interior tests.
inline constexpr double kInteriorMargin = 1e-9;
/// v.A entries >= -kSignTolerance count as nonnegative.
inline constexpr double kSignTolerance = 1e-9;

/// x -> <linear, x> + offset with a nonzero linear part.
class AffineForm {
public:
  AffineForm(Eigen::VectorXd linear, double offset = 0.0);

  const Eigen::VectorXd& linear() const { return linear_; }
  double offset() const { return offset_; }
  Eigen::Index dim() const { return linear_.size(); }

  double operator()(const Eigen::VectorXd& x) const { return linear_.dot(x) + offset_; }
  AffineForm scaled(double s) const { return AffineForm(s * linear_, s * offset_); }

private:
  Eigen::VectorXd linear_;
  double offset_;
};

/// Cone of nonnegative combinations of a finite generator list.
class NormalCone {
public:
  explicit NormalCone(std::vector<Eigen::VectorXd> generators);

  const std::vector<Eigen::VectorXd>& generators() const { return gens_; }

  /// Lawson-Hanson nonnegative least squares: lambda >= 0 minimizing
  /// |sum lambda_g g - x|.
  Eigen::VectorXd nnls_coefficients(const Eigen::VectorXd& x) const;

  /// Residual of the NNLS fit at most tol * max(1, |x|).
  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;

private:
  std::vector<Eigen::VectorXd> gens_;
  Eigen::MatrixXd matrix_;
};

/// Normal cone of the tip {all forms equal}: the cone spanned by the linear
/// parts. Throws std::invalid_argument("degenerate tip") unless they are
/// linearly independent.
NormalCone tip_normal_cone(std::span<const AffineForm> forms);

struct NestedCheck {
  bool nested = false;
  /// Smallest slack of the strict inequalities; nested iff margin > kInteriorMargin.
  double margin = 0.0;
  Eigen::VectorXd tip_s;
  Eigen::VectorXd tip_t;
};

/// Is the normal set of the tip of Y_t (forms scaled by `scalings`) inside the
/// interior of the normal set at level s? Normal sets are tip + cone(linear
/// parts); the test checks the t-tip and tip + each generator against the
/// facet inequalities of the s-level set.
NestedCheck nested_normal_set(std::span<const AffineForm> forms, std::span<const double> scalings, double s,
                              double t);

inline bool nested_normal_set_check(std::span<const AffineForm> forms, std::span<const double> scalings, double s,
                                    double t) {
  return nested_normal_set(forms, scalings, s, t).nested;
}

struct Rescaling {
  std::vector<double> scalings;
  Eigen::VectorXd interior_point;
  int perturbation_rounds = 0;
};

/// Scalings 1/<linear_i, v> for an interior point v of the tip normal cone.
/// v starts at the sum of the unit generators; while some pairing is not
/// positive, the weights of the offending generators are doubled (index
/// order). Throws std::runtime_error("empty interior") after 64 rounds.
Rescaling rescale(std::span<const AffineForm> forms);

inline std::vector<double> rescale_constants(std::span<const AffineForm> forms) {
  return rescale(forms).scalings;
}

/// Linear forms x -> <w_j, x> for the fundamental weights (unit length when
/// `normalize`).
std::vector<AffineForm> weight_forms(const rootsys::RootSystemData& rs, bool normalize = true);

struct Classification {
  rootsys::RootType type;
  bool is_linear = false;
  Eigen::VectorXd v;             // minimal-norm solution of v.W = (1,...,1)
  Eigen::VectorXd v_dot_roots;   // v.A
};

/// Solves v.W = (1,...,1) for the (normalized) weight matrix W and evaluates
/// the simple roots on v. is_linear iff every entry of v.A >= -kSignTolerance.
Classification linear_type_classification(const rootsys::RootType& type, bool normalize = true);

}  // namespace alab::cones
