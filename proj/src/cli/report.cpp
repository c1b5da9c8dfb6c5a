#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "alab/cli.hpp"

namespace alab::cli {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

long parse_long(std::string_view text, std::string_view whole) {
  std::string t = trim(text);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw UsageError("malformed number '" + std::string(whole) + "'");
  return v;
}

// One factor: integer, p, p^k.
Rational parse_factor(std::string_view f, long p, std::string_view whole) {
  std::string t = trim(f);
  if (t.empty()) throw UsageError("malformed expression '" + std::string(whole) + "'");
  if (t[0] == 'p') {
    if (t.size() == 1) return Rational(p);
    if (t[1] != '^') throw UsageError("malformed expression '" + std::string(whole) + "'");
    return Rational(p).pow(parse_long(std::string_view(t).substr(2), whole));
  }
  return Rational(Integer(parse_long(t, whole)));
}

Rational parse_product(std::string_view s, long p, std::string_view whole) {
  Rational r(1);
  for (const auto& f : split(s, '*')) r *= parse_factor(f, p, whole);
  return r;
}

std::string coefficient_sqrt2(const Rational& b) {
  if (b == Rational(1)) return "sqrt2";
  if (b.is_integer()) return b.to_string() + "sqrt2";
  return "(" + b.to_string() + ")sqrt2";
}

}  // namespace

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw UsageError("malformed number list '" + std::string(text) + "'");
    out.push_back(v);
  }
  return out;
}

std::optional<std::string> quadratic_tag(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  constexpr double kTol = 1e-10;
  const long double root2 = std::sqrt(2.0L);
  for (long qb : {1L, 2L, 3L, 4L, 6L}) {
    for (long kb = 0; kb <= 8 * qb; ++kb) {
      for (long sign : {1L, -1L}) {
        if (kb == 0 && sign < 0) continue;
        if (kb != 0 && std::gcd(kb, qb) != 1) continue;
        if (kb == 0 && qb != 1) continue;
        const Rational b(Integer(sign * kb), Integer(qb));
        const long double a = static_cast<long double>(x) - static_cast<long double>(b.to_double()) * root2;
        for (long qa = 1; qa <= 12; ++qa) {
          const long double scaled = a * qa;
          const long double nearest = std::round(scaled);
          if (std::fabs(static_cast<double>(scaled - nearest)) > kTol * static_cast<double>(qa)) continue;
          const Rational ar(Integer(static_cast<long>(nearest)), Integer(qa));
          if (b.is_zero()) return ar.to_string();
          if (ar.is_zero()) return b.sign() > 0 ? coefficient_sqrt2(b) : "-" + coefficient_sqrt2(-b);
          if (b.sign() < 0) return ar.to_string() + "-" + coefficient_sqrt2(-b);
          if (ar.sign() < 0) return coefficient_sqrt2(b) + ar.to_string();
          return ar.to_string() + "+" + coefficient_sqrt2(b);
        }
      }
    }
  }
  return std::nullopt;
}

Json number_json(double x) {
  if (std::fabs(x) < 5e-13) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  Json j;
  j["decimal"] = buf;
  if (auto tag = quadratic_tag(x))
    j["symbolic"] = *tag;
  else
    j["symbolic"] = nullptr;
  return j;
}

Rational parse_p_expr(std::string_view text, long p) {
  std::string t = trim(text);
  if (t.empty()) throw UsageError("empty expression");
  int sign = 1;
  std::string_view body(t);
  if (body[0] == '-' || body[0] == '+') {
    sign = body[0] == '-' ? -1 : 1;
    body.remove_prefix(1);
  }
  // a leading "-" inside p^-k belongs to the exponent, so split on '/' only
  auto slash = body.find('/');
  Rational num = parse_product(body.substr(0, slash), p, text);
  Rational den = slash == std::string_view::npos ? Rational(1) : parse_product(body.substr(slash + 1), p, text);
  if (den.is_zero()) throw UsageError("zero denominator in '" + std::string(text) + "'");
  return Rational(sign) * num / den;
}

bttree::Mat2 parse_matrix(std::string_view text, long p) {
  auto rows = split(text, ';');
  if (rows.size() != 2) throw UsageError("matrix needs two rows separated by ';': '" + std::string(text) + "'");
  bttree::Mat2 m;
  for (std::size_t i = 0; i < 2; ++i) {
    auto cells = split(rows[i], ',');
    if (cells.size() != 2) throw UsageError("matrix rows need two entries: '" + std::string(text) + "'");
    for (std::size_t j = 0; j < 2; ++j) m[2 * i + j] = parse_p_expr(cells[j], p);
  }
  return m;
}

bttree::Vertex parse_vertex(std::string_view text) {
  auto cells = split(text, ',');
  if (cells.size() != 2) throw UsageError("vertex must be 'm,a': '" + std::string(text) + "'");
  try {
    return {parse_long(cells[0], text), Rational::parse(cells[1])};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Json point_json(const cutproject::Point& p) {
  Json arr = Json::array();
  for (const auto& c : p.c) arr.push_back(c.to_string());
  return arr;
}

cutproject::Point parse_point(std::string_view text) {
  cutproject::Point p;
  try {
    for (const auto& cell : split(text, ',')) p.c.push_back(Rational::parse(cell));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

namespace {

Rational json_rational(const Json& v, const char* field) {
  if (v.is_number_integer()) return Rational(Integer(v.get<long>()));
  if (v.is_number_float()) return Rational::from_double(v.get<double>());
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw UsageError(std::string("config field '") + field + "' must be a number or a rational string");
}

}  // namespace

std::unique_ptr<cutproject::Scheme> scheme_from_config(const Json& config) {
  if (!config.is_object()) throw UsageError("scheme config must be a JSON object");
  if (config.contains("schema") && config["schema"] != kConfigSchema)
    throw UsageError(std::string("unsupported config schema, expected ") + kConfigSchema);
  if (!config.contains("scheme") || !config["scheme"].is_string()) throw UsageError("config needs a 'scheme' string");
  const std::string name = config["scheme"];
  const Rational window = config.contains("window") ? json_rational(config["window"], "window") : Rational(1);
  auto prime = [&]() -> long {
    if (!config.contains("p") || !config["p"].is_number_integer()) throw UsageError("scheme '" + name + "' needs an integer 'p'");
    return config["p"].get<long>();
  };
  try {
    if (name == "zsqrt2") return cutproject::make_zsqrt2(window);
    if (name == "z-one-over-p") return cutproject::make_z_one_over_p(prime(), window);
    if (name == "sl2") {
      auto side = cutproject::InternalSide::PAdic;
      if (config.contains("internal")) {
        const std::string s = config["internal"].get<std::string>();
        if (s == "real")
          side = cutproject::InternalSide::Real;
        else if (s != "p-adic")
          throw UsageError("'internal' must be \"p-adic\" or \"real\"");
      }
      return cutproject::make_sl2(prime(), side, window);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("cutproject: ") + e.what());
  }
  throw UsageError("unknown scheme '" + name + "' (expected zsqrt2, z-one-over-p or sl2)");
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace alab::cli
