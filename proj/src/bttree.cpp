#include "alab/bttree.hpp"

#include <algorithm>
#include <stdexcept>

#include "alab/arith.hpp"
#include "alab/places.hpp"

namespace alab::bttree {

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

Rational det(const Mat2& x) { return x[0] * x[3] - x[1] * x[2]; }

Mat2 diag(const Rational& a, const Rational& d) { return {a, 0, 0, d}; }

Mat2 unipotent(const Rational& x) { return {1, x, 0, 1}; }

std::string to_string(const Vertex& v) { return "(" + std::to_string(v.m) + "," + v.a.to_string() + ")"; }

namespace {

Mat2 inverse(const Mat2& x) {
  const Rational d = det(x);
  if (d.is_zero()) throw std::invalid_argument("singular matrix");
  return {x[3] / d, -x[1] / d, -x[2] / d, x[0] / d};
}

}  // namespace

Tree::Tree(long p, long depth) : p_(p), depth_(depth), pz_(p) {
  if (!arith::is_prime(pz_)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (depth < 1) throw std::invalid_argument("depth must be positive");
}

Mat2 Tree::basis(const Vertex& v) const { return {Rational(p_).pow(v.m), v.a, 0, 1}; }

Vertex Tree::from_basis(const Mat2& b) const {
  // columns (x1, y1), (x2, y2)
  Rational x1 = b[0], x2 = b[1], y1 = b[2], y2 = b[3];
  if (det(b).is_zero()) throw std::invalid_argument("basis is not invertible");
  auto val = [&](const Rational& q) { return places::valuation(q, pz_); };
  if (y2.is_zero() || (!y1.is_zero() && val(y1) < val(y2))) {
    std::swap(x1, x2);
    std::swap(y1, y2);
  }
  // y1/y2 is p-integral: clear y1, then divide by y2
  if (!y1.is_zero()) x1 -= x2 * (y1 / y2);
  x1 /= y2;
  x2 /= y2;
  const long m = val(x1);
  // a = x2 mod p^m Z_p, represented in Z[1/p] n [0, p^m)
  Rational a;
  if (!x2.is_zero()) {
    const Rational y = x2 / Rational(p_).pow(m);
    Integer den = y.denominator();
    const unsigned long j = arith::remove_factor(den, pz_);  // den is now the prime-to-p part
    if (j > 0) {
      const Integer pj = arith::ipow(pz_, j);
      Integer w_inv;
      mpz_invert(w_inv.get_mpz_t(), den.get_mpz_t(), pj.get_mpz_t());
      Integer u = y.numerator() * w_inv;
      mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), pj.get_mpz_t());
      a = Rational(u, pj) * Rational(p_).pow(m);
    }
  }
  return {m, a};
}

void Tree::check_depth(const Vertex& v) const {
  // d(o, v) from the basis [[p^m, a], [0, 1]]
  long low = std::min(v.m, 0L);
  if (!v.a.is_zero()) low = std::min(low, places::valuation(v.a, pz_));
  if (v.m - 2 * low > 4 * depth_) throw std::runtime_error("increase depth");
}

Vertex Tree::act(const Mat2& g, const Vertex& v) const {
  if (det(g).is_zero()) throw std::invalid_argument("group element must be invertible");
  Vertex w = from_basis(mat_mul(g, basis(v)));
  check_depth(w);
  return w;
}

long Tree::distance(const Vertex& v, const Vertex& w) const {
  const Mat2 rel = mat_mul(inverse(basis(v)), basis(w));
  long low = 0;
  bool first = true;
  for (const auto& e : rel) {
    if (e.is_zero()) continue;
    const long k = places::valuation(e, pz_);
    low = first ? k : std::min(low, k);
    first = false;
  }
  return places::valuation(det(rel), pz_) - 2 * low;
}

std::vector<Vertex> Tree::neighbors(const Vertex& v) const {
  const Mat2 b = basis(v);
  std::vector<Vertex> out;
  for (long j = 0; j < p_; ++j) out.push_back(from_basis(mat_mul(b, Mat2{p_, j, 0, 1})));
  out.push_back(from_basis(mat_mul(b, Mat2{1, 0, 0, p_})));
  std::sort(out.begin(), out.end());
  return out;
}

Vertex Tree::ray(const End& end, long t) const {
  if (t < 0) throw std::invalid_argument("ray time must be nonnegative");
  if (!end.xi) return {-t, 0};
  const Rational& xi = *end.xi;
  const long e = xi.is_zero() ? 0 : std::max(0L, -places::valuation(xi, pz_));
  if (t <= e) return {-t, 0};
  const long s = t - 2 * e;
  return from_basis(Mat2{Rational(p_).pow(s), xi, 0, 1});
}

long Tree::busemann(const End& end, const Vertex& x, long T) const {
  const long bound = distance(origin(), x) + 2;
  if (T <= bound) throw std::invalid_argument("truncation T must exceed " + std::to_string(bound));
  return T - distance(ray(end, T), x);
}

long Tree::busemann(const End& end, const Vertex& x) const { return busemann(end, x, distance(origin(), x) + 3); }

Vertex Tree::random_vertex(std::mt19937_64& rng) const {
  const long n = std::uniform_int_distribution<long>(0, depth_)(rng);
  Vertex prev = origin(), cur = origin();
  for (long i = 0; i < n; ++i) {
    auto nb = neighbors(cur);
    if (i > 0) nb.erase(std::find(nb.begin(), nb.end(), prev));
    const Vertex next = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
    prev = cur;
    cur = next;
  }
  return cur;
}

TransformReport Tree::horofunction_transform_check(const Mat2& g, const std::vector<Vertex>& samples) const {
  if (!g[2].is_zero()) throw std::invalid_argument("group element must be upper triangular");
  if (det(g) != Rational(1)) throw std::invalid_argument("group element must have determinant 1");
  TransformReport rep;
  rep.samples = samples;
  rep.log_chi = -places::valuation(g[0] * g[0], pz_);
  const End inf = End::infinity();
  for (const auto& x : samples) rep.shifts.push_back(busemann(inf, act(g, x)) - busemann(inf, x));

  rep.verdict = "pass";
  if (!rep.shifts.empty()) {
    const long s0 = rep.shifts.front();
    for (std::size_t i = 0; i < rep.shifts.size(); ++i) {
      if (rep.shifts[i] != s0) {
        rep.verdict = "fail";
        rep.witness = "shift " + std::to_string(rep.shifts[i]) + " at " + to_string(samples[i]) + " differs from " +
                      std::to_string(s0) + " at " + to_string(samples.front());
        break;
      }
    }
    if (rep.verdict == "pass") {
      rep.constant = s0;
      if (rep.log_chi != 0) {
        rep.c = Rational(s0) / Rational(rep.log_chi);
      } else if (s0 != 0) {
        rep.verdict = "fail";
        rep.witness = "nonzero shift " + std::to_string(s0) + " for |chi(g)|_p = 1";
      }
    }
  }
  return rep;
}

}  // namespace alab::bttree
