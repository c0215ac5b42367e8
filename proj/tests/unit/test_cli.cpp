#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "eqsep/cli.hpp"
#include "eqsep/errors.hpp"

using namespace eqsep;

namespace {

struct Run
{
  int code = -1;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run invoke(std::vector<std::string> args)
{
  args.insert(args.begin(), "eqsep");
  std::vector<char const *> argv;
  for (auto const &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string cfg(std::string const &name)
{
  return (std::filesystem::path(EQSEP_SOURCE_DIR) / "configs" / name).string();
}

std::string graph(std::string const &name)
{
  return (std::filesystem::path(EQSEP_SOURCE_DIR) / "graphs" / name).string();
}

} // namespace

TEST_SUITE("cli")
{
  TEST_CASE("rho report shape")
  {
    auto r = invoke({"rho", cfg("cnn1_z2.json")});
    REQUIRE(r.code == cli::exit_ok);
    auto j = r.json();
    CHECK(j["schema_version"] == cli::report_schema_version);
    CHECK(j["tool"] == "eqsep");
    CHECK(j["command"] == "rho");
    CHECK(j["result"]["members"].size() == 2);
    CHECK(j["result"]["input_dim"] == 2);
    CHECK(j["stats"].contains("memo_hits"));
    CHECK(j.contains("timing"));
    CHECK(j["inputs_digest"].get<std::string>().size() == 16);
  }

  TEST_CASE("reports are deterministic without timing")
  {
    auto a = invoke({"--no-timing", "rho", cfg("ign2_s3.json")});
    auto b = invoke({"--no-timing", "--exec", "serial", "rho", cfg("ign2_s3.json")});
    REQUIRE(a.code == 0);
    CHECK_FALSE(a.json().contains("timing"));
    CHECK(a.out == b.out);
  }

  TEST_CASE("identify")
  {
    auto same = invoke({"identify", cfg("cnn1_z2.json"), "--alpha", "1,2",
                        "--beta", "2,1", "--expect", "identified"});
    CHECK(same.code == cli::exit_ok);
    CHECK(same.json()["result"]["identified"] == true);
    auto wrong = invoke({"identify", cfg("cnn1_z2.json"), "--alpha", "1,2",
                         "--beta", "1,3", "--expect", "identified"});
    CHECK(wrong.code == cli::exit_property_failed);
    auto bad = invoke({"identify", cfg("cnn1_z2.json"), "--alpha", "1,2,3",
                       "--beta", "1,3"});
    CHECK(bad.code == cli::exit_input_error);
  }

  TEST_CASE("compare")
  {
    auto r = invoke({"compare", cfg("cnn1_z3.json"), cfg("cnn3_z3.json")});
    REQUIRE(r.code == cli::exit_ok);
    CHECK(r.json()["result"]["comparison"] == "strict_superset");
    auto fail = invoke({"compare", cfg("cnn1_z3.json"), cfg("cnn3_z3.json"),
                        "--expect", "equal"});
    CHECK(fail.code == cli::exit_property_failed);
    CHECK(cli::parse_comparison("incomparable") == Comparison::incomparable);
    CHECK_THROWS_AS(cli::parse_comparison("bigger"), ConfigError);
  }

  TEST_CASE("stabilize")
  {
    auto r = invoke({"stabilize", cfg("depth_z3.json"), "--layer", "0", "--max", "3"});
    REQUIRE(r.code == cli::exit_ok);
    auto j = r.json()["result"];
    CHECK(j["monotone"] == true);
    CHECK(j["members_per_repetition"].size() == 3);
  }

  TEST_CASE("verify")
  {
    auto r = invoke({"verify", "width"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.json()["result"]["passed"] == true);
    CHECK(invoke({"verify", "nonsense"}).code == cli::exit_input_error);
  }

  TEST_CASE("empirical on vectors and graphs")
  {
    auto r = invoke({"empirical", cfg("cnn1_z3.json"), "--alpha", "1,2,3",
                     "--beta", "1,2,4", "--samples", "64", "--expect", "separated"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.json()["result"]["oracle"]["verdict"] == "separated");
    auto g = invoke({"empirical", cfg("ign2_s3.json"), "--graph-a", graph("path3.txt"),
                     "--graph-b", graph("path3_relabeled.txt"), "--samples", "64",
                     "--expect", "identified"});
    CHECK(g.code == cli::exit_ok);
    CHECK(g.json()["result"]["wl"]["k2_distinguishes"] == false);
    auto both = invoke({"empirical", cfg("cnn1_z3.json"), "--alpha", "1,2,3",
                        "--graph-a", graph("path3.txt")});
    CHECK(both.code == cli::exit_input_error);
    auto nan = invoke({"empirical", cfg("cnn1_z3.json"), "--alpha", "1,2,3",
                       "--beta", "1,2,4", "--scales", "-1"});
    CHECK(nan.code == cli::exit_input_error);
  }

  TEST_CASE("basis")
  {
    auto r = invoke({"basis", "--group", "symmetric(3)", "--source", "natural",
                     "--target", "natural", "--matrices"});
    REQUIRE(r.code == cli::exit_ok);
    CHECK(r.json()["result"]["generators"].size() == 2);
    auto dc = invoke({"basis", "--group", "symmetric(3)", "--source",
                      "cosets(trivial)", "--target", "cosets(alternating)",
                      "--kind", "double_coset"});
    CHECK(dc.code == cli::exit_ok);
    auto bad = invoke({"basis", "--group", "symmetric(3)", "--source", "natural",
                       "--target", "natural", "--kind", "double_coset"});
    CHECK(bad.code == cli::exit_input_error);
  }

  TEST_CASE("text format and output file")
  {
    auto t = invoke({"--format", "text", "identify", cfg("cnn1_z2.json"),
                     "--alpha", "1,2", "--beta", "2,1"});
    CHECK(t.code == 0);
    CHECK(t.out.find("identified") != std::string::npos);
    auto path = std::filesystem::temp_directory_path() / "eqsep_cli_test.json";
    auto f = invoke({"--output", path.string(), "rho", cfg("sum_readout_z3.json")});
    CHECK(f.code == 0);
    CHECK(f.out.empty());
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in);
    CHECK(j["command"] == "rho");
    std::filesystem::remove(path);
  }

  TEST_CASE("exit codes for bad input and caps")
  {
    CHECK(invoke({"rho", cfg("absent.json")}).code == cli::exit_input_error);
    CHECK(invoke({"rho"}).code == cli::exit_input_error);
    CHECK(invoke({"frobnicate"}).code == cli::exit_input_error);
    CHECK(invoke({"--help"}).code == cli::exit_ok);
    auto cap = invoke({"--max-union-members", "2", "rho",
                       cfg("regular_s3_alternating.json")});
    CHECK(cap.code == cli::exit_resource_limit);
    auto j = cap.json();
    CHECK(j["error"]["kind"] == "resource_limit");
    CHECK(j["partial_stats"].contains("nodes"));
    CHECK(invoke({"--max-block-size", "4", "rho", cfg("depth_z3.json")}).code ==
          cli::exit_resource_limit);
  }
}
