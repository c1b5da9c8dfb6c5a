#include "alab/rootsys.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace alab::rootsys {

namespace {

bool valid_rank(char family, int rank) {
  switch (family) {
    case 'A': return rank >= 1 && rank <= 8;
    case 'B':
    case 'C': return rank >= 2 && rank <= 8;
    case 'D': return rank >= 4 && rank <= 8;
    case 'E': return rank >= 6 && rank <= 8;
    case 'F': return rank == 4;
    case 'G': return rank == 2;
    default: return false;
  }
}

// Sets the listed (row, value) entries of column `col`.
void put(QMatrix& m, std::size_t col, std::initializer_list<std::pair<std::size_t, Rational>> entries) {
  for (const auto& [row, v] : entries) m(row, col) = v;
}

QMatrix simple_roots_for(const RootType& t, std::size_t& ambient) {
  const std::size_t r = static_cast<std::size_t>(t.rank);
  const Rational half(1, 2);
  QMatrix a;
  switch (t.family) {
    case 'A':
      ambient = r + 1;
      a = QMatrix(ambient, r);
      for (std::size_t i = 0; i < r; ++i) put(a, i, {{i, 1}, {i + 1, -1}});
      break;
    case 'B':
    case 'C':
    case 'D':
      ambient = r;
      a = QMatrix(ambient, r);
      for (std::size_t i = 0; i + 1 < r; ++i) put(a, i, {{i, 1}, {i + 1, -1}});
      if (t.family == 'B') put(a, r - 1, {{r - 1, 1}});
      if (t.family == 'C') put(a, r - 1, {{r - 1, 2}});
      if (t.family == 'D') put(a, r - 1, {{r - 2, 1}, {r - 1, 1}});
      break;
    case 'E': {
      // E6 and E7 use the first simple roots of E8 inside R^8.
      ambient = 8;
      a = QMatrix(ambient, r);
      for (std::size_t k = 0; k < 8; ++k) a(k, 0) = (k == 0 || k == 7) ? half : -half;
      put(a, 1, {{0, 1}, {1, 1}});
      for (std::size_t i = 2; i < r; ++i) put(a, i, {{i - 1, 1}, {i - 2, -1}});
      break;
    }
    case 'F':
      ambient = 4;
      a = QMatrix(ambient, 4);
      put(a, 0, {{1, 1}, {2, -1}});
      put(a, 1, {{2, 1}, {3, -1}});
      put(a, 2, {{3, 1}});
      put(a, 3, {{0, half}, {1, -half}, {2, -half}, {3, -half}});
      break;
    case 'G':
      ambient = 3;
      a = QMatrix(ambient, 2);
      put(a, 0, {{0, 1}, {1, -1}});
      put(a, 1, {{0, -2}, {1, 1}, {2, 1}});
      break;
    default:
      throw std::invalid_argument("unknown root system family");
  }
  return a;
}

}  // namespace

RootType RootType::parse(std::string_view label) {
  if (label.size() < 2) throw std::invalid_argument("unknown root system label '" + std::string(label) + "'");
  char family = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
  int rank = 0;
  auto digits = label.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rank);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || !valid_rank(family, rank))
    throw std::invalid_argument("unknown root system label '" + std::string(label) + "'");
  return {family, rank};
}

std::vector<RootType> supported_types() {
  std::vector<RootType> out;
  for (char f : {'A', 'B', 'C', 'D', 'E', 'F', 'G'})
    for (int r = 1; r <= 8; ++r)
      if (valid_rank(f, r)) out.push_back({f, r});
  return out;
}

RootSystemData build_root_system(const RootType& type) {
  if (!valid_rank(type.family, type.rank))
    throw std::invalid_argument("unknown root system label '" + type.label() + "'");
  RootSystemData rs;
  rs.type = type;
  rs.simple_roots = simple_roots_for(type, rs.ambient_dim);
  // omega = A * (C^-1)^T solves <omega_i, alpha_j^vee> = delta_ij inside the
  // span of the roots, which is where Bourbaki places the weights.
  QMatrix c = cartan_matrix(rs);
  rs.fund_weights = rs.simple_roots * c.inverse().transpose();
  return rs;
}

QMatrix cartan_matrix(const RootSystemData& rs) {
  const std::size_t r = rs.rank();
  std::vector<std::vector<Rational>> roots(r);
  for (std::size_t i = 0; i < r; ++i) roots[i] = rs.root(i);
  QMatrix c(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) c(i, j) = Rational(2) * dot(roots[i], roots[j]) / dot(roots[j], roots[j]);
  return c;
}

Eigen::MatrixXd normalized_weights(const RootSystemData& rs) {
  Eigen::MatrixXd w = rs.fund_weights.to_eigen();
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    // squared length is rational; take the root of the exact value
    double len = std::sqrt(dot(rs.weight(j), rs.weight(j)).to_double());
    w.col(j) /= len;
  }
  return w;
}

CoeffMatrices coeff_matrices(const RootSystemData& rs) {
  CoeffMatrices m;
  m.c = cartan_matrix(rs);
  m.n = m.c.inverse();
  return m;
}

OrthogonalityReport orthogonality_check(const RootSystemData& rs) {
  const std::size_t r = rs.rank();
  OrthogonalityReport rep;
  rep.pairings = rs.simple_roots.transpose() * rs.fund_weights;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const Rational& v = rep.pairings(i, j);
      bool bad = (i == j) ? v.sign() <= 0 : !v.is_zero();
      if (bad) {
        rep.ok = false;
        rep.violations.push_back("<alpha_" + std::to_string(i + 1) + ", omega_" + std::to_string(j + 1) +
                                 "> = " + v.to_string());
      }
    }
  return rep;
}

}  // namespace alab::rootsys
