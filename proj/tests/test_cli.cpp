#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "qfilter/io.hpp"
#include "test_states.hpp"

namespace qfilter {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  if (pos == std::string::npos) throw std::runtime_error("missing " + key + " in\n" + text);
  return std::stod(text.substr(pos + key.size() + 2));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qfilter_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_state(const std::string& name, const TwoQubitState& s) {
    const fs::path p = dir_ / name;
    write_json_file(p, state_to_json(s));
    return p.string();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, AnalyzeBellState) {
  const CliResult r = run({"analyze", write_state("bell.json", testing::bell_state(0))});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "concurrence"), 1.0, 1e-11);
  EXPECT_NEAR(field(r.out, "eof"), 1.0, 1e-11);
  EXPECT_NE(r.out.find("optimal ratio = 1,"), std::string::npos) << r.out;
}

TEST_F(Cli, AnalyzeJsonMaximallyMixed) {
  const CliResult r = run({"analyze", write_state("mm.json", testing::maximally_mixed()), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["concurrence"], 0.0);
  EXPECT_EQ(doc["eof"], 0.0);
  EXPECT_EQ(doc["alice"]["optimal_ratio"], 1.0);
  EXPECT_EQ(doc["bob"]["purity"], 0.5);
}

TEST_F(Cli, AnalyzeRandomStateIsSelfConsistent) {
  ASSERT_EQ(run({"random", "--seed", "5", "--out", path("r.json")}).code, 0);
  const CliResult r = run({"analyze", path("r.json"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  const TwoQubitState s = state_from_json(read_json_file(path("r.json")));
  EXPECT_NEAR(doc["concurrence"].get<double>(), concurrence(s).concurrence, 1e-15);
  const double a = doc["alice"]["bloch_length"];
  EXPECT_NEAR(doc["alice"]["purity"].get<double>(), 0.5 * (1 + a * a), 1e-15);
  EXPECT_NEAR(doc["alice"]["optimal_probability"].get<double>(), 1 - a, 1e-15);
}

TEST_F(Cli, AnalyzeReportsViolatedInvariant) {
  json doc = state_to_json(testing::maximally_mixed());
  doc["matrix"][0][0] = json::array({0.5, 0.0});
  write_json_file(path("bad.json"), doc);
  const CliResult r = run({"analyze", path("bad.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("trace"), std::string::npos) << r.err;
  EXPECT_EQ(run({"analyze", path("missing.json")}).code, 1);
}

TEST_F(Cli, OptimalFilterSixTenths) {
  const CliResult r = run({"optimal-filter", write_state("s.json", testing::state_a06()), "--side", "A", "--out",
                     path("f.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "x0"), 1.5, 1e-11);
  EXPECT_NEAR(field(r.out, "predicted ratio"), 1.25, 1e-11);
  EXPECT_NEAR(field(r.out, "predicted probability"), 0.4, 1e-11);
  const FilterOperator f = filter_from_json(read_json_file(path("f.json")));
  EXPECT_NEAR(f.x()[2], -0.5, 1e-15);
}

TEST_F(Cli, OptimalFilterZeroBlochIsIdentity) {
  const CliResult r = run({"optimal-filter", write_state("s.json", testing::bell_state(2)), "--side", "B"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "x0"), 2.0);
  EXPECT_EQ(field(r.out, "predicted ratio"), 1.0);
  EXPECT_EQ(field(r.out, "predicted probability"), 1.0);
}

TEST_F(Cli, OptimalFilterRejectsPureMarginal) {
  const TwoQubitState s = TwoQubitState::from_density_matrix(Mat4::diagonal({1.0, 0.0, 0.0, 0.0}));
  const CliResult r = run({"optimal-filter", write_state("p.json", s), "--side", "A"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("pure marginal"), std::string::npos) << r.err;
}

TEST_F(Cli, ApplyIdentity) {
  write_json_file(path("id.json"), filter_to_json(FilterOperator::identity(Side::Alice)));
  const CliResult r = run({"apply", write_state("s.json", random_state(3)), path("id.json"), "--out", path("post.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "probability"), 1.0);
  EXPECT_LE(max_abs_diff(state_from_json(read_json_file(path("post.json"))).rho(), random_state(3).rho()), 1e-15);
}

TEST_F(Cli, ApplyOptimalThenAnalyzeRoundTrip) {
  const std::string s = write_state("s.json", testing::state_a06());
  ASSERT_EQ(run({"optimal-filter", s, "--side", "A", "--out", path("f.json")}).code, 0);
  const CliResult r = run({"apply", s, path("f.json"), "--out", path("post.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "achieved ratio"), field(r.out, "predicted ratio"), 1e-8);
  const double after = field(r.out, "concurrence after");
  const CliResult again = run({"analyze", path("post.json")});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_NEAR(field(again.out, "concurrence"), after, 1e-9);
}

TEST_F(Cli, ApplyProjectorOnBell) {
  write_json_file(path("proj.json"), filter_to_json(FilterOperator::from_params(1.0, {0, 0, 1}, Side::Alice)));
  const CliResult r = run({"apply", write_state("b.json", testing::bell_state(0)), path("proj.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "concurrence after"), 0.0, 1e-11);
  EXPECT_NEAR(field(r.out, "probability"), 0.5, 1e-11);
}

TEST_F(Cli, ApplyErrors) {
  std::ofstream(path("bad_filter.json")) << R"({"x0": 0.3, "x": [0.5, 0, 0], "side": "A"})";
  const std::string s = write_state("s.json", testing::bell_state(0));
  EXPECT_EQ(run({"apply", s, path("bad_filter.json")}).code, 1);
  const TwoQubitState up = TwoQubitState::from_density_matrix(Mat4::diagonal({1.0, 0.0, 0.0, 0.0}));
  write_json_file(path("kill.json"), filter_to_json(FilterOperator::from_params(1.0, {0, 0, -1}, Side::Alice)));
  const CliResult r = run({"apply", write_state("up.json", up), path("kill.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("vanishing"), std::string::npos) << r.err;
}

TEST_F(Cli, SweepRowsAndShape) {
  ASSERT_EQ(run({"sweep", "--min", "0", "--max", "0.9", "--steps", "4", "--out", path("s.csv")}).code, 0);
  std::ifstream in(path("s.csv"), std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text,
            "a,ratio,gain,probability\n"
            "0,1,0,1\n"
            "0.3,1.04828483672192,0.0482848367219182,0.7\n"
            "0.6,1.25,0.25,0.4\n"
            "0.9,2.29415733870562,1.29415733870562,0.1\n");
}

TEST_F(Cli, SweepRangeViolations) {
  EXPECT_EQ(run({"sweep", "--min", "0.5", "--max", "0.5", "--steps", "3", "--out", path("s.csv")}).code, 2);
  EXPECT_EQ(run({"sweep", "--min", "0", "--max", "1", "--steps", "3", "--out", path("s.csv")}).code, 2);
  EXPECT_EQ(run({"sweep", "--min", "0", "--max", "0.5", "--steps", "1", "--out", path("s.csv")}).code, 2);
  EXPECT_EQ(run({"sweep", "--min", "-0.1", "--max", "0.5", "--steps", "3", "--out", path("s.csv")}).code, 2);
}

TEST_F(Cli, VerifyMinimalRunIsDeterministic) {
  const CliResult a = run({"verify", "--seed", "3", "--trials", "1"});
  const CliResult b = run({"verify", "--seed", "3", "--trials", "1"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("PASS filtering.transformation_law cases="), std::string::npos);
  EXPECT_EQ(run({"verify", "--trials", "0"}).code, 2);
}

TEST_F(Cli, VerifyDefaultRunPasses) {
  const CliResult r = run({"verify"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST_F(Cli, RandomIsDeterministic) {
  ASSERT_EQ(run({"random", "--seed", "9", "--out", path("a.json")}).code, 0);
  ASSERT_EQ(run({"random", "--seed", "9", "--out", path("b.json")}).code, 0);
  EXPECT_EQ(read_json_file(path("a.json")), read_json_file(path("b.json")));
}

TEST_F(Cli, Measure) {
  std::ofstream(path("m.json")) << R"({"theta": 0.3, "phi": 0.3})";
  const CliResult r = run({"measure", write_state("s.json", testing::state_a06()), path("m.json"), "--side", "B"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "expected concurrence"), 0.4, 1e-11);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"analyze"}).code, 2);
  EXPECT_EQ(run({"optimal-filter", path("x.json")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
}  // namespace qfilter
