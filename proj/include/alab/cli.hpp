#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "alab/bttree.hpp"
#include "alab/cutproject.hpp"
#include "alab/rational.hpp"

namespace alab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "alab-report/1";
inline constexpr const char* kConfigSchema = "alab-config/1";

/// Bad flags, values or config files; exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Outcome of one subcommand before it is wrapped into a report.
struct Result {
  Json payload = Json::object();
  std::optional<std::string> verdict;  // "pass", "fail" or "inconclusive"
  std::optional<std::string> witness;
  std::optional<std::string> csv;      // replaces the JSON report on output
};

/// {decimal: 12-place string, symbolic: "a+b*sqrt2"-style tag or null}.
Json number_json(double x);
/// Exact tag for x = a + b*sqrt2 with small rational a, b ("2-sqrt2",
/// "sqrt2-1", "2sqrt2-3", "1/2"); nullopt when no such form fits.
std::optional<std::string> quadratic_tag(double x);

std::vector<double> parse_doubles(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);
/// Rational expression in the prime p: "3/2", "p", "-p", "1/p", "p^-2", "2/p^3".
Rational parse_p_expr(std::string_view text, long p);
/// "a,b;c,d" with entries as in parse_p_expr.
bttree::Mat2 parse_matrix(std::string_view text, long p);
/// "m,a" for a tree vertex.
bttree::Vertex parse_vertex(std::string_view text);

Json point_json(const cutproject::Point& p);
cutproject::Point parse_point(std::string_view text);

/// Scheme from a config object {scheme, p, window, internal}.
std::unique_ptr<cutproject::Scheme> scheme_from_config(const Json& config);
Json load_json(const std::string& path);

/// Runs every check of a suite config; throws UsageError when malformed.
Result run_suite(const Json& config, unsigned long long seed);

/// Entry point: argv without the program name. Writes the report to `out`
/// (or --out) and diagnostics to `err`; returns 0, 1 or 2.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alab::cli
