#include "alab/cutproject.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "alab/arith.hpp"
#include "alab/places.hpp"

namespace alab::cutproject {

namespace {

__extension__ typedef __int128 i128;

long to_long(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("height does not fit in a long");
  return z.get_si();
}

// Sign of u + v*sqrt2, exactly.
int sign_sqrt2(const Rational& u, const Rational& v) {
  const int su = u.sign();
  const int sv = v.sign();
  if (sv == 0) return su;
  if (su == 0 || su == sv) return sv;
  const Rational u2 = u * u;
  const Rational v2 = Rational(2) * v * v;
  return u2 > v2 ? su : sv;  // u^2 = 2 v^2 has no rational solution with v != 0
}

// |u + v*sqrt2| <= c
bool sqrt2_abs_le(const Rational& u, const Rational& v, const Rational& c) {
  return sign_sqrt2(c - u, -v) >= 0 && sign_sqrt2(u + c, v) >= 0;
}

double sqrt2_value(const Rational& u, const Rational& v) {
  return static_cast<double>(static_cast<long double>(u.to_double()) +
                             static_cast<long double>(v.to_double()) * std::sqrt(2.0L));
}

// p-power part of a denominator; nullopt unless den is a power of p.
std::optional<unsigned long> p_exponent(const Integer& den, const Integer& p) {
  Integer rest = den;
  unsigned long k = arith::remove_factor(rest, p);
  if (rest != 1) return std::nullopt;
  return k;
}

double padic_abs(const Rational& x, long p) {
  if (x.is_zero()) return 0.0;
  return std::pow(static_cast<double>(p), static_cast<double>(-places::valuation(x, Integer(p))));
}

Rational random_rational(std::mt19937_64& rng, long p) {
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> exp(1, 2);
  const long other = p == 3 ? 7 : 3;
  Rational r(num(rng));
  switch (kind(rng)) {
    case 0: return r;
    case 1: return r / Rational(p).pow(exp(rng));
    default: return r / Rational(other);
  }
}

void require_coords(const Point& x, std::size_t n, const char* scheme) {
  if (x.c.size() != n)
    throw std::invalid_argument(std::string(scheme) + " expects " + std::to_string(n) + " coordinates, got " +
                                std::to_string(x.c.size()));
}

std::string window_text(const Rational& c) { return "[-" + c.to_string() + "," + c.to_string() + "]"; }

// --- Z[sqrt2] ---------------------------------------------------------------

class ZSqrt2 final : public Scheme {
public:
  explicit ZSqrt2(Rational c) : c_(std::move(c)) {
    if (c_.sign() <= 0) throw std::invalid_argument("window radius must be positive");
  }

  std::string name() const override { return "zsqrt2"; }
  std::string params() const override { return "window=" + window_text(c_); }

  Point identity() const override { return {{0, 0}}; }
  Point compose(const Point& x, const Point& y) const override {
    require_coords(x, 2, "zsqrt2");
    require_coords(y, 2, "zsqrt2");
    return {{x.c[0] + y.c[0], x.c[1] + y.c[1]}};
  }
  Point inverse(const Point& x) const override {
    require_coords(x, 2, "zsqrt2");
    return {{-x.c[0], -x.c[1]}};
  }

  bool is_lattice_point(const Point& g) const override {
    return g.c.size() == 2 && g.c[0].is_integer() && g.c[1].is_integer();
  }
  Point star(const Point& g) const override { return {{g.c[0], -g.c[1]}}; }
  std::optional<Point> star_inverse(const Point& h) const override {
    if (!is_lattice_point(h)) return std::nullopt;
    return Point{{h.c[0], -h.c[1]}};
  }
  long height(const Point& g) const override {
    if (!is_lattice_point(g)) throw std::invalid_argument("height of a non-lattice point " + to_string(g));
    return std::max(to_long(abs(g.c[0].numerator())), to_long(abs(g.c[1].numerator())));
  }

  bool in_window(const Point& h) const override { return sqrt2_abs_le(h.c[0], h.c[1], c_); }
  bool in_window_square(const Point& h) const override { return sqrt2_abs_le(h.c[0], h.c[1], Rational(2) * c_); }

  double dist_g(const Point& x, const Point& y) const override {
    return std::abs(sqrt2_value(x.c[0] - y.c[0], x.c[1] - y.c[1]));
  }
  double dist_h(const Point& x, const Point& y) const override { return dist_g(x, y); }

  void enumerate_lattice(long n, const std::function<void(const Point&)>& visit) const override {
    for (long a = -n; a <= n; ++a)
      for (long b = -n; b <= n; ++b) visit(Point{{Rational(a), Rational(b)}});
  }

  Point sample_g(std::mt19937_64& rng) const override {
    return {{random_rational(rng, 2), random_rational(rng, 2)}};
  }

  std::optional<double> g_real(const Point& g) const override { return sqrt2_value(g.c[0], g.c[1]); }

private:
  Rational c_;
};

// --- Z[1/p] -----------------------------------------------------------------

class ZOneOverP final : public Scheme {
public:
  ZOneOverP(long p, Rational c) : p_(p), c_(std::move(c)) {
    if (!arith::is_prime(Integer(p))) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (c_.sign() <= 0) throw std::invalid_argument("window radius must be positive");
  }

  std::string name() const override { return "z-one-over-p"; }
  std::string params() const override { return "p=" + std::to_string(p_) + ", window=" + window_text(c_); }

  Point identity() const override { return {{0}}; }
  Point compose(const Point& x, const Point& y) const override {
    require_coords(x, 1, "z-one-over-p");
    require_coords(y, 1, "z-one-over-p");
    return {{x.c[0] + y.c[0]}};
  }
  Point inverse(const Point& x) const override {
    require_coords(x, 1, "z-one-over-p");
    return {{-x.c[0]}};
  }

  bool is_lattice_point(const Point& g) const override {
    return g.c.size() == 1 && p_exponent(g.c[0].denominator(), Integer(p_)).has_value();
  }
  Point star(const Point& g) const override { return g; }
  std::optional<Point> star_inverse(const Point& h) const override {
    if (!is_lattice_point(h)) return std::nullopt;
    return h;
  }
  long height(const Point& g) const override {
    if (!is_lattice_point(g)) throw std::invalid_argument("height of a non-lattice point " + to_string(g));
    long k = static_cast<long>(*p_exponent(g.c[0].denominator(), Integer(p_)));
    return std::max(to_long(abs(g.c[0].numerator())), k);
  }

  bool in_window(const Point& h) const override { return h.c[0].abs() <= c_; }
  bool in_window_square(const Point& h) const override { return h.c[0].abs() <= Rational(2) * c_; }

  double dist_g(const Point& x, const Point& y) const override { return padic_abs(x.c[0] - y.c[0], p_); }
  double dist_h(const Point& x, const Point& y) const override { return (x.c[0] - y.c[0]).abs().to_double(); }

  void enumerate_lattice(long n, const std::function<void(const Point&)>& visit) const override {
    std::vector<Rational> values;
    Integer pk = 1;
    for (long k = 0; k <= n; ++k) {
      for (long m = -n; m <= n; ++m) {
        if (k > 0 && m % p_ == 0) continue;
        values.emplace_back(Integer(m), pk);
      }
      pk *= p_;
    }
    std::sort(values.begin(), values.end());
    for (auto& v : values) visit(Point{{std::move(v)}});
  }

  Point sample_g(std::mt19937_64& rng) const override { return {{random_rational(rng, p_)}}; }

private:
  long p_;
  Rational c_;
};

// --- SL2(Z[1/p]) ------------------------------------------------------------

class Sl2 final : public Scheme {
public:
  Sl2(long p, InternalSide side, Rational c) : p_(p), side_(side), c_(std::move(c)) {
    if (!arith::is_prime(Integer(p))) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (c_ < Rational(1)) throw std::invalid_argument("sl2 window must contain the identity (c >= 1)");
  }

  std::string name() const override { return "sl2"; }
  std::string params() const override {
    return "p=" + std::to_string(p_) + ", internal=" + (side_ == InternalSide::PAdic ? "p-adic" : "real") +
           ", entry bound=" + c_.to_string();
  }

  Point identity() const override { return {{1, 0, 0, 1}}; }
  Point compose(const Point& x, const Point& y) const override {
    require_coords(x, 4, "sl2");
    require_coords(y, 4, "sl2");
    const auto& a = x.c;
    const auto& b = y.c;
    return {{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
             a[2] * b[1] + a[3] * b[3]}};
  }
  Point inverse(const Point& x) const override {
    require_coords(x, 4, "sl2");
    const Rational det = x.c[0] * x.c[3] - x.c[1] * x.c[2];
    if (det != Rational(1)) throw std::invalid_argument("sl2 element must have determinant 1");
    return {{x.c[3], -x.c[1], -x.c[2], x.c[0]}};
  }

  bool is_lattice_point(const Point& g) const override {
    if (g.c.size() != 4) return false;
    for (const auto& e : g.c)
      if (!p_exponent(e.denominator(), Integer(p_))) return false;
    return g.c[0] * g.c[3] - g.c[1] * g.c[2] == Rational(1);
  }
  Point star(const Point& g) const override { return g; }
  std::optional<Point> star_inverse(const Point& h) const override {
    if (!is_lattice_point(h)) return std::nullopt;
    return h;
  }
  long height(const Point& g) const override {
    if (!is_lattice_point(g)) throw std::invalid_argument("height of a non-lattice point " + to_string(g));
    if (g == identity()) return 0;
    long h = 0;
    for (const auto& e : g.c) {
      long k = static_cast<long>(*p_exponent(e.denominator(), Integer(p_)));
      h = std::max({h, k, to_long(abs(e.numerator()))});
    }
    return h;
  }

  bool in_window(const Point& h) const override { return exact_in(h, c_); }
  bool in_window_square(const Point& h) const override {
    return exact_in(h, side_ == InternalSide::PAdic ? c_ * c_ : Rational(2) * c_ * c_);
  }

  double dist_g(const Point& x, const Point& y) const override {
    return diff_norm(x, y, side_ == InternalSide::PAdic ? InternalSide::Real : InternalSide::PAdic);
  }
  double dist_h(const Point& x, const Point& y) const override { return diff_norm(x, y, side_); }

  void enumerate_lattice(long n, const std::function<void(const Point&)>& visit) const override;

  Point sample_g(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<int> pick(0, 2);
    Point g = identity();
    for (int step = 0; step < 3; ++step) {
      Rational t = random_rational(rng, p_);
      Point e;
      switch (pick(rng)) {
        case 0: e = {{1, t, 0, 1}}; break;
        case 1: e = {{1, 0, t, 1}}; break;
        default: {
          Rational u = t.is_zero() ? Rational(p_) : t;
          e = {{u, 0, 0, u.inverse()}};
        }
      }
      g = compose(g, e);
    }
    return g;
  }

private:
  double entry_abs(const Rational& x, InternalSide side) const {
    return side == InternalSide::PAdic ? padic_abs(x, p_) : x.abs().to_double();
  }
  double diff_norm(const Point& x, const Point& y, InternalSide side) const {
    double m = 0;
    for (std::size_t i = 0; i < 4; ++i) m = std::max(m, entry_abs(x.c[i] - y.c[i], side));
    return m;
  }
  // every entry's H-absolute value <= bound, exactly
  bool exact_in(const Point& h, const Rational& bound) const {
    for (const auto& e : h.c) {
      if (e.is_zero()) continue;
      Rational a = side_ == InternalSide::PAdic ? places::normalized_abs(e, places::Place::finite(p_)).value : e.abs();
      if (a > bound) return false;
    }
    return true;
  }

  long p_;
  InternalSide side_;
  Rational c_;
};

// Entries are m/p^k with |m| <= n, k <= n. Work with integers scaled by
// D = p^n: a = A/D etc., and ad - bc = 1 becomes A*Dd = D^2 + B*C.
// For a != 0 the bound |d| <= n restricts c to an interval.
void Sl2::enumerate_lattice(long n, const std::function<void(const Point&)>& visit) const {
  if (n < 0) return;
  if (n == 0) {
    visit(identity());
    return;
  }
  i128 scale = 1;
  for (long i = 0; i < n; ++i) {
    scale *= p_;
    if (scale * (n + 1) > (i128(1) << 60)) throw std::overflow_error("height too large for sl2 enumeration");
  }
  const int64_t D = static_cast<int64_t>(scale);
  std::vector<int64_t> E;
  for (long k = 0; k <= n; ++k) {
    int64_t step = D;
    for (long i = 0; i < k; ++i) step /= p_;
    for (long m = -n; m <= n; ++m) {
      if (k > 0 && m % p_ == 0) continue;
      E.push_back(m * step);
    }
  }
  std::sort(E.begin(), E.end());
  E.erase(std::unique(E.begin(), E.end()), E.end());

  const Integer Dz(static_cast<long>(D));
  auto to_q = [&](int64_t x) { return Rational(Integer(static_cast<long>(x)), Dz); };
  auto member = [&](i128 x) {
    if (x < E.front() || x > E.back()) return false;
    return std::binary_search(E.begin(), E.end(), static_cast<int64_t>(x));
  };
  auto floor_div = [](i128 x, i128 y) {
    i128 q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return q;
  };
  const i128 D2 = i128(D) * D;

  for (int64_t A : E) {
    if (A == 0) {
      // bc = -1, d free
      for (int64_t B : E) {
        if (B == 0) continue;
        i128 num = -D2;
        if (num % B != 0) continue;
        i128 C = num / B;
        if (!member(C)) continue;
        for (int64_t Dd : E) visit(Point{{to_q(0), to_q(B), to_q(static_cast<int64_t>(C)), to_q(Dd)}});
      }
      continue;
    }
    const i128 bound = i128(n) * D * (A < 0 ? -A : A);  // |D^2 + B C| <= n D |A|
    for (int64_t B : E) {
      std::size_t lo = 0, hi = E.size();
      if (B == 0) {
        if (D2 > bound) continue;
      } else {
        const i128 low = -bound - D2;
        const i128 high = bound - D2;
        i128 cmin, cmax;
        if (B > 0) {
          cmin = -floor_div(-low, B);
          cmax = floor_div(high, B);
        } else {
          cmin = -floor_div(-high, B);
          cmax = floor_div(low, B);
        }
        if (cmin > cmax || cmax < E.front() || cmin > E.back()) continue;
        cmin = std::max<i128>(cmin, E.front());
        cmax = std::min<i128>(cmax, E.back());
        lo = static_cast<std::size_t>(std::lower_bound(E.begin(), E.end(), static_cast<int64_t>(cmin)) - E.begin());
        hi = static_cast<std::size_t>(std::upper_bound(E.begin(), E.end(), static_cast<int64_t>(cmax)) - E.begin());
      }
      for (std::size_t i = lo; i < hi; ++i) {
        const int64_t C = E[i];
        const i128 num = D2 + i128(B) * C;
        if (num % A != 0) continue;
        const i128 Dd = num / A;
        if (member(Dd)) visit(Point{{to_q(A), to_q(B), to_q(C), to_q(static_cast<int64_t>(Dd))}});
      }
    }
  }
}

template <class Cover>
std::vector<Point> greedy_cover(const std::vector<Point>& candidates, std::size_t targets, Cover covers,
                                std::size_t& uncovered) {
  // covers(candidate index) -> list of target indices
  std::vector<std::vector<std::size_t>> sets(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) sets[i] = covers(i);
  std::vector<bool> done(targets, false);
  std::size_t remaining = targets;
  std::vector<Point> chosen;
  while (remaining > 0) {
    std::size_t best = candidates.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::size_t gain = 0;
      for (std::size_t t : sets[i]) gain += done[t] ? 0 : 1;
      if (gain > best_gain) {  // strict: earliest (lexicographically smallest) wins ties
        best_gain = gain;
        best = i;
      }
    }
    if (best == candidates.size()) break;
    chosen.push_back(candidates[best]);
    for (std::size_t t : sets[best]) {
      if (!done[t]) {
        done[t] = true;
        --remaining;
      }
    }
  }
  uncovered = remaining;
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// The identity goes first so that it wins greedy ties.
void identity_first(std::vector<Point>& candidates, const Point& e) {
  std::stable_partition(candidates.begin(), candidates.end(), [&](const Point& x) { return x == e; });
}

bool in_truncated_model_set(const Scheme& s, const Point& g, long height) {
  return s.is_lattice_point(g) && s.height(g) <= height && s.in_window(s.star(g));
}

}  // namespace

std::string to_string(const Point& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.c.size(); ++i) os << (i ? "," : "") << p.c[i];
  os << ')';
  return os.str();
}

std::unique_ptr<Scheme> make_zsqrt2(const Rational& c) { return std::make_unique<ZSqrt2>(c); }

std::unique_ptr<Scheme> make_z_one_over_p(long p, const Rational& c) { return std::make_unique<ZOneOverP>(p, c); }

std::unique_ptr<Scheme> make_sl2(long p, InternalSide internal, const Rational& c) {
  return std::make_unique<Sl2>(p, internal, c);
}

Point star_map(const Scheme& scheme, const Point& g) {
  if (!scheme.is_lattice_point(g)) throw std::invalid_argument(to_string(g) + " is not in the lattice");
  return scheme.star(g);
}

ModelSetTruncation enumerate_model_set(const Scheme& scheme, long n) {
  if (n < 0) throw std::invalid_argument("height must be nonnegative");
  ModelSetTruncation out;
  out.height = n;
  scheme.enumerate_lattice(n, [&](const Point& g) {
    if (scheme.in_window(scheme.star(g))) out.points.push_back(g);
  });
  return out;
}

ApproxGroupCertificate approximate_group_certificate(const Scheme& scheme, const ModelSetTruncation& lambda,
                                                     long extended_height) {
  if (lambda.points.empty()) throw std::invalid_argument("empty model set");
  ApproxGroupCertificate cert;
  cert.extended_height = extended_height < 0 ? 2 * lambda.height : extended_height;

  std::map<Point, std::pair<std::size_t, std::size_t>> products;
  for (std::size_t i = 0; i < lambda.points.size(); ++i)
    for (std::size_t j = 0; j < lambda.points.size(); ++j)
      products.try_emplace(scheme.compose(lambda.points[i], lambda.points[j]), i, j);
  cert.products = products.size();

  std::vector<Point> xs;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  for (const auto& [x, ij] : products) {
    if (scheme.height(x) > cert.extended_height) {
      ++cert.skipped;
      continue;
    }
    xs.push_back(x);
    origin.push_back(ij);
  }

  std::set<Point> cand_set;
  for (const auto& x : xs)
    for (const auto& l : lambda.points) {
      Point f = scheme.compose(scheme.inverse(l), x);
      if (scheme.in_window_square(scheme.star(f))) cand_set.insert(std::move(f));
    }
  std::vector<Point> candidates(cand_set.begin(), cand_set.end());
  identity_first(candidates, scheme.identity());
  std::vector<Point> inverses;
  inverses.reserve(candidates.size());
  for (const auto& f : candidates) inverses.push_back(scheme.inverse(f));

  std::size_t uncovered = 0;
  cert.F = greedy_cover(
      candidates, xs.size(),
      [&](std::size_t ci) {
        std::vector<std::size_t> hit;
        for (std::size_t t = 0; t < xs.size(); ++t)
          if (in_truncated_model_set(scheme, scheme.compose(xs[t], inverses[ci]), cert.extended_height))
            hit.push_back(t);
        return hit;
      },
      uncovered);
  cert.covered = xs.size() - uncovered;

  for (std::size_t t = 0; t < xs.size(); ++t) {
    for (const auto& f : cert.F) {
      Point l = scheme.compose(xs[t], scheme.inverse(f));
      if (in_truncated_model_set(scheme, l, cert.extended_height)) {
        cert.witnesses.push_back({lambda.points[origin[t].first], lambda.points[origin[t].second], xs[t], l, f});
        break;
      }
    }
  }
  return cert;
}

bool verify_certificate(const Scheme& scheme, const ApproxGroupCertificate& cert) {
  for (const auto& w : cert.witnesses) {
    if (scheme.compose(w.left, w.right) != w.product) return false;
    if (scheme.compose(w.lambda, w.f) != w.product) return false;
    if (!scheme.in_model_set(w.lambda)) return false;
    if (!std::binary_search(cert.F.begin(), cert.F.end(), w.f)) return false;
  }
  return cert.witnesses.size() == cert.covered;
}

DescentCertificate descent_sets(const Scheme& scheme, std::span<const Point> I, std::span<const Point> K,
                                std::span<const std::vector<Point>> pi_samples, long height) {
  DescentCertificate out;
  out.height = height;
  std::set<Point> targets;
  for (const auto& i : I)
    for (const auto& k : K) targets.insert(scheme.compose(i, scheme.inverse(k)));
  out.targets.assign(targets.begin(), targets.end());

  std::vector<Point> lattice;
  scheme.enumerate_lattice(height, [&](const Point& g) { lattice.push_back(g); });
  identity_first(lattice, scheme.identity());
  std::vector<Point> stars, star_inv;
  stars.reserve(lattice.size());
  for (const auto& g : lattice) {
    stars.push_back(scheme.star(g));
    star_inv.push_back(scheme.inverse(stars.back()));
  }

  std::size_t uncovered_f = 0, uncovered_e = 0;
  out.F = greedy_cover(
      lattice, out.targets.size(),
      [&](std::size_t ci) {
        std::vector<std::size_t> hit;
        for (std::size_t t = 0; t < out.targets.size(); ++t)
          if (scheme.in_window(scheme.compose(out.targets[t], star_inv[ci]))) hit.push_back(t);
        return hit;
      },
      uncovered_f);
  out.E = greedy_cover(
      lattice, out.targets.size(),
      [&](std::size_t ci) {
        std::vector<std::size_t> hit;
        for (std::size_t t = 0; t < out.targets.size(); ++t)
          if (scheme.in_window(scheme.compose(star_inv[ci], out.targets[t]))) hit.push_back(t);
        return hit;
      },
      uncovered_e);
  if (uncovered_f > 0 || uncovered_e > 0) throw std::runtime_error("increase height bound");

  std::vector<Point> gammas;
  for (const auto& t : out.targets)
    if (auto g = scheme.star_inverse(t)) gammas.push_back(*g);
  std::vector<Point> e_inv;
  std::vector<Point> f_inv;
  for (const auto& e : out.E) e_inv.push_back(scheme.inverse(e));
  for (const auto& f : out.F) f_inv.push_back(scheme.inverse(f));

  for (const auto& pi_set : pi_samples) {
    ++out.samples_checked;
    std::vector<Point> pi_inv;
    for (const auto& p : pi_set) pi_inv.push_back(scheme.inverse(p));
    for (const auto& gamma : gammas) {
      for (const auto& pi : pi_set) {
        ++out.elements_checked;
        const Point g = scheme.compose(gamma, pi);
        bool in_right = false, in_left = false;
        for (std::size_t a = 0; a < pi_set.size() && !(in_right && in_left); ++a) {
          const Point base = scheme.compose(g, pi_inv[a]);
          if (!scheme.is_lattice_point(base)) continue;
          for (const auto& fi : f_inv)
            if (!in_right && scheme.in_model_set(scheme.compose(base, fi))) in_right = true;
          for (const auto& ei : e_inv)
            if (!in_left && scheme.in_model_set(scheme.compose(ei, base))) in_left = true;
        }
        if (!in_right || !in_left) {
          ++out.violations;
          if (out.witnesses.size() < 8)
            out.witnesses.push_back("g=" + to_string(g) + (in_right ? "" : " not in Lambda*F*Pi") +
                                    (in_left ? "" : " not in E*Lambda*Pi"));
        }
      }
    }
  }
  return out;
}

std::vector<Point> star_sample(const Scheme& scheme, double radius, long n) {
  std::set<Point> out;
  scheme.enumerate_lattice(n, [&](const Point& g) {
    Point h = scheme.star(g);
    if (scheme.h_norm(h) <= radius) out.insert(std::move(h));
  });
  return {out.begin(), out.end()};
}

CommensurabilityReport commensurability(const Scheme& a, const Scheme& b, long n) {
  if (a.name() != b.name()) throw std::invalid_argument("commensurability needs schemes over the same lattice");
  const auto la = enumerate_model_set(a, n);
  const auto lb = enumerate_model_set(b, n);
  CommensurabilityReport rep;
  auto one_way = [](const Scheme& host, const ModelSetTruncation& from, const ModelSetTruncation& into,
                    std::size_t& uncovered) {
    std::set<Point> cand;
    for (const auto& x : from.points)
      for (const auto& y : into.points) cand.insert(host.compose(host.inverse(y), x));
    std::vector<Point> candidates(cand.begin(), cand.end());
    identity_first(candidates, host.identity());
    return greedy_cover(
        candidates, from.points.size(),
        [&](std::size_t ci) {
          std::vector<std::size_t> hit;
          const Point fi = host.inverse(candidates[ci]);
          for (std::size_t t = 0; t < from.points.size(); ++t)
            if (host.in_model_set(host.compose(from.points[t], fi))) hit.push_back(t);
          return hit;
        },
        uncovered);
  };
  std::size_t u1 = 0, u2 = 0;
  rep.F_ab = one_way(b, la, lb, u1);
  rep.F_ba = one_way(a, lb, la, u2);
  rep.uncovered = u1 + u2;
  return rep;
}

double relative_density_gap(const Scheme& scheme, const ModelSetTruncation& lambda, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("empty range");
  std::vector<double> xs;
  for (const auto& g : lambda.points) {
    auto x = scheme.g_real(g);
    if (!x) throw std::invalid_argument("relative density needs a real G side");
    if (*x >= lo && *x <= hi) xs.push_back(*x);
  }
  std::sort(xs.begin(), xs.end());
  if (xs.empty()) return hi - lo;
  double gap = std::max(xs.front() - lo, hi - xs.back());
  for (std::size_t i = 1; i < xs.size(); ++i) gap = std::max(gap, xs[i] - xs[i - 1]);
  return gap;
}

}  // namespace alab::cutproject
