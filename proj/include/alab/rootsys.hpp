#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "alab/qmatrix.hpp"

namespace alab::rootsys {

/// Irreducible reduced root system type, e.g. A3, D4, E8.
struct RootType {
  char family = 'A';
  int rank = 1;

  /// Accepts A1-A8, B2-B8, C2-C8, D4-D8, E6-E8, F4, G2 (case-insensitive
  /// family letter). Throws std::invalid_argument otherwise.
  static RootType parse(std::string_view label);

  std::string label() const { return std::string(1, family) + std::to_string(rank); }
  /// A, B, C, F, G: Dynkin diagram is a path.
  bool linear_diagram() const { return family != 'D' && family != 'E'; }

  friend bool operator==(const RootType&, const RootType&) = default;
};

/// Every type accepted by RootType::parse, ordered by family then rank.
std::vector<RootType> supported_types();

/// Simple roots and fundamental weights as columns, in Bourbaki coordinates.
/// All entries are rational.
struct RootSystemData {
  RootType type;
  std::size_t ambient_dim = 0;
  QMatrix simple_roots;   // ambient_dim x rank
  QMatrix fund_weights;   // ambient_dim x rank

  std::size_t rank() const { return simple_roots.cols(); }
  std::vector<Rational> root(std::size_t i) const { return simple_roots.column(i); }
  std::vector<Rational> weight(std::size_t i) const { return fund_weights.column(i); }
};

RootSystemData build_root_system(const RootType& type);
inline RootSystemData build_root_system(std::string_view label) {
  return build_root_system(RootType::parse(label));
}

/// C_ij = <alpha_i, alpha_j^vee> with alpha^vee = 2 alpha / <alpha, alpha>.
QMatrix cartan_matrix(const RootSystemData& rs);

/// Fundamental weights rescaled to unit Euclidean length (columns).
Eigen::MatrixXd normalized_weights(const RootSystemData& rs);

/// alpha_i = sum_j c(i,j) omega_j and omega_j = sum_i n(j,i) alpha_i.
/// With the weights as basis, c is the Cartan matrix and n its inverse.
struct CoeffMatrices {
  QMatrix c;
  QMatrix n;
};

CoeffMatrices coeff_matrices(const RootSystemData& rs);

struct OrthogonalityReport {
  QMatrix pairings;  // (i, j) -> <alpha_i, omega_j>
  bool ok = true;
  std::vector<std::string> violations;
};

/// <alpha_i, omega_j> = 0 off the diagonal and > 0 on it. Violations are
/// collected, never thrown.
OrthogonalityReport orthogonality_check(const RootSystemData& rs);

}  // namespace alab::rootsys
