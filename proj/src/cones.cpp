#include "alab/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace alab::cones {

namespace {

Eigen::MatrixXd linear_parts(std::span<const AffineForm> forms) {
  if (forms.empty()) throw std::invalid_argument("no forms given");
  const Eigen::Index dim = forms.front().dim();
  Eigen::MatrixXd w(dim, static_cast<Eigen::Index>(forms.size()));
  for (std::size_t j = 0; j < forms.size(); ++j) {
    if (forms[j].dim() != dim) throw std::invalid_argument("forms live in different dimensions");
    w.col(static_cast<Eigen::Index>(j)) = forms[j].linear();
  }
  return w;
}

void require_independent(const Eigen::MatrixXd& w) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(w);
  lu.setThreshold(1e-10);
  if (lu.rank() != w.cols()) throw std::invalid_argument("degenerate tip");
}

}  // namespace

AffineForm::AffineForm(Eigen::VectorXd linear, double offset) : linear_(std::move(linear)), offset_(offset) {
  if (linear_.size() == 0 || linear_.isZero(0.0)) throw std::invalid_argument("affine form must be non-constant");
}

NormalCone::NormalCone(std::vector<Eigen::VectorXd> generators) : gens_(std::move(generators)) {
  if (gens_.empty()) throw std::invalid_argument("cone needs at least one generator");
  const Eigen::Index dim = gens_.front().size();
  matrix_.resize(dim, static_cast<Eigen::Index>(gens_.size()));
  for (std::size_t j = 0; j < gens_.size(); ++j) {
    if (gens_[j].size() != dim) throw std::invalid_argument("generators of different dimension");
    matrix_.col(static_cast<Eigen::Index>(j)) = gens_[j];
  }
}

Eigen::VectorXd NormalCone::nnls_coefficients(const Eigen::VectorXd& b) const {
  const Eigen::MatrixXd& a = matrix_;
  const Eigen::Index n = a.cols();
  if (b.size() != a.rows()) throw std::invalid_argument("point has wrong dimension");
  const double tol = 1e-12 * std::max(1.0, a.norm() * b.norm());

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = a.transpose() * (b - a * x);

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    Eigen::VectorXd zp = ap.colPivHouseholderQr().solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
    return z;
  };

  for (int outer = 0; outer < 3 * static_cast<int>(n) + 10; ++outer) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner < 3 * static_cast<int>(n) + 10; ++inner) {
      Eigen::VectorXd z = solve_passive();
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0;
        }
      }
    }
    w = a.transpose() * (b - a * x);
  }
  return x;
}

bool NormalCone::contains(const Eigen::VectorXd& x, double tol) const {
  Eigen::VectorXd lambda = nnls_coefficients(x);
  double residual = (matrix_ * lambda - x).norm();
  return residual <= tol * std::max(1.0, x.norm());
}

NormalCone tip_normal_cone(std::span<const AffineForm> forms) {
  Eigen::MatrixXd w = linear_parts(forms);
  require_independent(w);
  std::vector<Eigen::VectorXd> gens;
  gens.reserve(forms.size());
  for (const auto& f : forms) gens.push_back(f.linear());
  return NormalCone(std::move(gens));
}

NestedCheck nested_normal_set(std::span<const AffineForm> forms, std::span<const double> scalings, double s,
                              double t) {
  if (!(s < t)) throw std::invalid_argument("nested check needs s < t");
  if (scalings.size() != forms.size()) throw std::invalid_argument("one scaling per form required");
  for (double c : scalings)
    if (!(c > 0)) throw std::invalid_argument("scalings must be positive");

  const Eigen::Index r = static_cast<Eigen::Index>(forms.size());
  Eigen::MatrixXd w(forms.front().dim(), r);
  Eigen::VectorXd offsets(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const AffineForm scaled = forms[static_cast<std::size_t>(j)].scaled(scalings[static_cast<std::size_t>(j)]);
    w.col(j) = scaled.linear();
    offsets(j) = scaled.offset();
  }
  require_independent(w);

  // Tip of level tau: the point of span(w) with <w_j, p> + offset_j = tau.
  // Coordinates against the dual basis w (w^T w)^-1 give the facet slacks.
  Eigen::LDLT<Eigen::MatrixXd> gram(w.transpose() * w);
  auto tip = [&](double tau) -> Eigen::VectorXd {
    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(r, tau) - offsets;
    return w * gram.solve(rhs);
  };
  auto slack = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& base) -> double {
    return gram.solve(w.transpose() * (x - base)).minCoeff();
  };

  NestedCheck out;
  out.tip_s = tip(s);
  out.tip_t = tip(t);
  out.margin = slack(out.tip_t, out.tip_s);
  for (Eigen::Index j = 0; j < r; ++j) out.margin = std::min(out.margin, slack(out.tip_t + w.col(j), out.tip_s));
  out.nested = out.margin > kInteriorMargin;
  return out;
}

Rescaling rescale(std::span<const AffineForm> forms) {
  Eigen::MatrixXd w = linear_parts(forms);
  require_independent(w);
  const Eigen::Index r = w.cols();
  Eigen::MatrixXd unit = w;
  for (Eigen::Index j = 0; j < r; ++j) unit.col(j).normalize();

  Eigen::VectorXd weights = Eigen::VectorXd::Ones(r);
  Rescaling out;
  for (int round = 0; round <= 64; ++round) {
    Eigen::VectorXd v = unit * weights;
    Eigen::VectorXd pairing = w.transpose() * v;
    bool interior = true;
    for (Eigen::Index j = 0; j < r; ++j) {
      if (pairing(j) <= kInteriorMargin) {
        interior = false;
        weights(j) *= 2.0;
      }
    }
    if (interior) {
      out.interior_point = v;
      out.perturbation_rounds = round;
      out.scalings.resize(static_cast<std::size_t>(r));
      for (Eigen::Index j = 0; j < r; ++j) out.scalings[static_cast<std::size_t>(j)] = 1.0 / pairing(j);
      return out;
    }
  }
  throw std::runtime_error("empty interior");
}

std::vector<AffineForm> weight_forms(const rootsys::RootSystemData& rs, bool normalize) {
  Eigen::MatrixXd w = normalize ? rootsys::normalized_weights(rs) : rs.fund_weights.to_eigen();
  std::vector<AffineForm> forms;
  forms.reserve(static_cast<std::size_t>(w.cols()));
  for (Eigen::Index j = 0; j < w.cols(); ++j) forms.emplace_back(w.col(j), 0.0);
  return forms;
}

Classification linear_type_classification(const rootsys::RootType& type, bool normalize) {
  const auto rs = rootsys::build_root_system(type);
  Eigen::MatrixXd w = normalize ? rootsys::normalized_weights(rs) : rs.fund_weights.to_eigen();
  Eigen::MatrixXd a = rs.simple_roots.to_eigen();
  Classification out;
  out.type = type;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(w.cols());
  out.v = w * (w.transpose() * w).ldlt().solve(ones);
  out.v_dot_roots = a.transpose() * out.v;
  out.is_linear = out.v_dot_roots.minCoeff() >= -kSignTolerance;
  return out;
}

}  // namespace alab::cones
