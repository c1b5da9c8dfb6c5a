#include "doctest.h"

#include <sstream>

#include "alab/cli.hpp"

namespace cli = alab::cli;
using cli::Json;

namespace {

const std::string kData = ALAB_TEST_DATA;

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json payload_without_timing(const Outcome& o) {
  Json r = o.report();
  r.erase("timing");
  return r;
}

}  // namespace

TEST_CASE("report envelope") {
  const auto o = call({"places", "product-formula", "3/2"});
  REQUIRE(o.code == 0);
  const auto r = o.report();
  CHECK(r["schema_version"] == cli::kReportSchema);
  CHECK(r["payload"]["value"] == "1");
  CHECK(r["verdict"] == "pass");
  CHECK(r.contains("timing"));
  CHECK(r.contains("command"));
}

TEST_CASE("D4 classification via the CLI") {
  const auto o = call({"cones", "classify", "--type", "D4"});
  REQUIRE(o.code == 0);
  const auto p = o.report()["payload"];
  CHECK(p["is_linear"] == false);
  CHECK(p["v"][1]["symbolic"] == "sqrt2-1");
  CHECK(p["v"][2]["symbolic"] == "2-sqrt2");
  CHECK(p["v_dot_A"][1]["symbolic"] == "2sqrt2-3");
  CHECK(p["v_dot_A"][1]["decimal"] == "-0.171572875254");
}

TEST_CASE("classification table as CSV") {
  const auto o = call({"cones", "classify", "--all"});
  REQUIRE(o.code == 0);
  CHECK(o.out.rfind("type,is_linear", 0) == 0);
  CHECK(o.out.find("D4,false") != std::string::npos);
  CHECK(o.out.find("G2,true") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  auto o = call({"nosuchcmd"});
  CHECK(o.code == 2);
  CHECK(o.err.find("nosuchcmd") != std::string::npos);
  CHECK(call({}).code == 2);
  CHECK(call({"places", "valuation", "3/2", "--p", "2", "--bogus"}).code == 2);
  CHECK(call({"places", "valuation", "abc", "--p", "2"}).code == 2);
  CHECK(call({"rootsys", "dump", "--type", "Q7"}).code == 2);
  CHECK(call({"coarse", "vr", "--input", kData + "/missing.json", "--r", "1"}).code == 2);
}

TEST_CASE("module errors are wrapped and exit 1") {
  const auto o = call({"places", "valuation", "0", "--p", "3"});
  CHECK(o.code == 1);
  CHECK(o.err.find("places: valuation of zero undefined") != std::string::npos);
}

TEST_CASE("subcommands reach their modules") {
  CHECK(call({"places", "valuation", "2000", "--p", "5"}).report()["payload"]["value"] == 3);
  CHECK(call({"places", "window", "7/25", "--s", "5", "--c", "1"}).report()["payload"]["value"] == true);
  CHECK(call({"rootsys", "dump", "--type", "A2"}).report()["payload"]["cartan"] == Json::parse(R"([["2","-1"],["-1","2"]])"));
  CHECK(call({"rootsys", "orthogonality", "--all"}).code == 0);
  CHECK(call({"cones", "rescale", "--type", "D4"}).code == 0);
  CHECK(call({"cutproject", "enumerate", "--scheme", "zsqrt2", "--height", "6"}).report()["payload"]["count"] == 19);
  CHECK(call({"cutproject", "certify", "--config", kData + "/zsqrt2.json", "--height", "6"}).code == 0);
  CHECK(call({"coarse", "vr", "--input", kData + "/two_clusters.json", "--r", "1", "--max-dim", "2"})
            .report()["payload"]["components"] == 2);
  CHECK(call({"coarse", "probe", "--input", kData + "/two_clusters.json", "--schedule", "1,2,4", "--h1"}).code == 0);
  CHECK(call({"bttree", "distance", "--p", "2", "--v", "0,0", "--w", "2,1"}).report()["payload"]["distance"] == 2);
  const auto b = call({"bttree", "busemann", "--p", "2", "--depth", "8", "--g", "p,0;0,1/p"});
  CHECK(b.code == 0);
  CHECK(b.report()["payload"]["constant"] == -2);
  CHECK(b.report()["verdict"] == "pass");
}

TEST_CASE("--out writes the report to a file") {
  const std::string path = std::string(ALAB_TEST_OUT) + "/cli_out.json";
  const auto o = call({"--out", path, "places", "abs", "3/2", "--at", "2"});
  CHECK(o.code == 0);
  CHECK(o.out.empty());
  CHECK(cli::load_json(path)["payload"]["value"] == "2");
}

TEST_CASE("determinism of payloads") {
  const std::vector<std::vector<std::string>> cmds{
      {"--seed", "7", "cutproject", "descent", "--scheme", "zsqrt2", "--height", "6", "--samples", "10"},
      {"--seed", "7", "bttree", "busemann", "--p", "3", "--g", "p,0;0,1/p", "--samples", "20"},
      {"--seed", "3", "suite", kData + "/smoke_suite.json"},
  };
  for (const auto& c : cmds) {
    CAPTURE(c[2]);
    const auto a = call(c), b = call(c);
    CHECK(a.code == b.code);
    CHECK(payload_without_timing(a).dump() == payload_without_timing(b).dump());
  }
}

TEST_CASE("suites") {
  const auto empty = call({"suite", kData + "/empty_suite.json"});
  CHECK(empty.code == 0);
  CHECK(empty.report()["payload"]["checks"].empty());
  CHECK(empty.report()["payload"]["passed"] == 0);

  const auto neg = call({"suite", kData + "/negative_control.json"});
  CHECK(neg.code == 1);
  CHECK(neg.report()["verdict"] == "fail");
  CHECK(neg.report()["witness"].get<std::string>().find("second entry") != std::string::npos);

  CHECK(call({"suite", kData + "/malformed_suite.json"}).code == 2);

  const auto smoke = call({"suite", kData + "/smoke_suite.json"});
  CHECK(smoke.code == 0);
  CHECK(smoke.report()["payload"]["failed"] == 0);
}

TEST_CASE("quadratic tags") {
  CHECK(cli::quadratic_tag(std::sqrt(2.0) - 1) == "sqrt2-1");
  CHECK(cli::quadratic_tag(2 - std::sqrt(2.0)) == "2-sqrt2");
  CHECK(cli::quadratic_tag(2 * std::sqrt(2.0) - 3) == "2sqrt2-3");
  CHECK(cli::quadratic_tag(1 + std::sqrt(2.0)) == "1+sqrt2");
  CHECK(cli::quadratic_tag(std::sqrt(2.0) / 2) == "(1/2)sqrt2");
  CHECK(cli::quadratic_tag(0.75) == "3/4");
  CHECK(cli::quadratic_tag(0) == "0");
  CHECK_FALSE(cli::quadratic_tag(3.14159));
  CHECK(cli::number_json(1.0 / 3)["decimal"] == "0.333333333333");
}

TEST_CASE("expression parsers") {
  CHECK(cli::parse_p_expr("p^-2", 3) == alab::Rational::parse("1/9"));
  CHECK(cli::parse_p_expr("3*p^2", 2) == alab::Rational(12));
  CHECK(cli::parse_p_expr("-1/p", 5) == alab::Rational::parse("-1/5"));
  CHECK_THROWS_AS(cli::parse_p_expr("q", 2), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_matrix("1,2;3", 2), cli::UsageError);
  CHECK(cli::parse_vertex("2,3/4").m == 2);
  CHECK_THROWS_AS(cli::scheme_from_config(Json::parse(R"({"scheme":"sl2"})")), cli::UsageError);
  CHECK_THROWS_AS(cli::scheme_from_config(Json::parse(R"({"scheme":"zsqrt2","schema":"v0"})")), cli::UsageError);
}
