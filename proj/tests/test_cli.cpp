#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "emw/case_io.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using emw::testing::data_path;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = emw::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("emw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

std::vector<std::string> case39_args(const std::string& cmd) {
  return {cmd, data_path("case39.m"), "--sidecar", data_path("case39_dyn.json")};
}

}  // namespace

TEST_F(CliTest, ValidateExitCodes) {
  auto args = case39_args("validate");
  EXPECT_EQ(run(args).code, 0);

  std::string two = emw::read_text_file(data_path("two_bus.json"));
  two.replace(two.find("\"kind\": \"pq\""), 12, "\"kind\": \"slack\"");
  const auto r = run({"validate", write("two_slack.json", two)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("multiple slack"), std::string::npos);

  EXPECT_EQ(run({"validate", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"validate", write("bad.json", "{ not json")}).code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"simulate", data_path("two_bus.json"), "x.json", "--model", "quantum"}).code, 2);
  EXPECT_EQ(run({"--version"}).code, 0);
}

TEST_F(CliTest, PathCommand) {
  auto args = case39_args("path");
  args.insert(args.end(), {"--src", "39", "--dst", "31"});
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["buses"].front(), 39);
  EXPECT_EQ(j["buses"].back(), 31);
  args[5] = "99";
  EXPECT_EQ(run(args).code, 1);
}

TEST_F(CliTest, PowerflowAndInertiaExports) {
  auto pf = case39_args("powerflow");
  pf.insert(pf.end(), {"--out", path("pf.csv")});
  ASSERT_EQ(run(pf).code, 0);
  EXPECT_EQ(emw::read_text_file(path("pf.csv")).rfind("bus_id,v_mag_pu", 0), 0u);
  auto in = case39_args("distribute-inertia");
  const auto r = run(in);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("line_id,j_total,j_per_mile", 0), 0u);
}

TEST_F(CliTest, SimulateWritesArtifactsDeterministically) {
  auto args = case39_args("simulate");
  args.insert(args.end(), {data_path("scenarios/case39_load_step.json"), "--t-end", "1.5", "--out", path("a")});
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("39 -> 9"), std::string::npos);
  for (const char* f : {"wavefield.csv", "grid.csv", "path.json", "arrival.json", "analysis.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(path("a") + "/" + f)) << f;
  }
  // Re-running from the manifest reproduces every artifact byte for byte.
  const auto r2 = run({"simulate", "--config", path("a") + "/manifest.json", "--out", path("b")});
  ASSERT_EQ(r2.code, 0) << r2.err;
  for (const char* f : {"wavefield.csv", "grid.csv", "path.json", "arrival.json", "analysis.json"}) {
    EXPECT_EQ(emw::read_text_file(path("a") + "/" + f), emw::read_text_file(path("b") + "/" + f)) << f;
  }
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  nlohmann::json cfg = {{"case", data_path("two_bus.json")},
                        {"scenario", data_path("scenarios/two_bus_load_step.json")},
                        {"t-end", 0.5},
                        {"out", path("from_config")}};
  write("cfg.json", cfg.dump());
  ASSERT_EQ(run({"simulate", "--config", path("cfg.json"), "--out", path("from_flag")}).code, 0);
  EXPECT_TRUE(fs::exists(path("from_flag") + "/manifest.json"));
  EXPECT_FALSE(fs::exists(path("from_config")));
  const auto m = nlohmann::json::parse(emw::read_text_file(path("from_flag") + "/manifest.json"));
  EXPECT_DOUBLE_EQ(m["t-end"].get<double>(), 0.5);

  write("typo.json", R"({"t_end": 1})");
  EXPECT_EQ(run({"simulate", "--config", path("typo.json")}).code, 2);
}

TEST_F(CliTest, ZeroMagnitudeSaysNoPropagation) {
  write("zero.json", R"({"disturbance": {"kind": "load_step", "target": 2, "magnitude_fraction": 0.0, "t_start": 0.1},
                        "src": 2, "dst": 1})");
  const auto r = run({"simulate", data_path("two_bus.json"), path("zero.json"), "--t-end", "0.5", "--out", path("z")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("no propagation"), std::string::npos);
}

TEST_F(CliTest, CourantAboveLimitExitsNumerical) {
  const auto r = run({"simulate", data_path("two_bus.json"), data_path("scenarios/two_bus_load_step.json"), "--courant",
                      "1.5", "--t-end", "2", "--out", path("c")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("simulate"), std::string::npos);
}

TEST_F(CliTest, SweepSingleValueMatchesSimulate) {
  auto sim = case39_args("simulate");
  sim.insert(sim.end(), {data_path("scenarios/case39_load_step.json"), "--t-end", "1.5", "--out", path("s")});
  ASSERT_EQ(run(sim).code, 0);
  auto sw = case39_args("sweep");
  sw.insert(sw.end(), {data_path("scenarios/case39_load_step.json"), "--t-end", "1.5", "--param", "length", "--values",
                       "1", "--line", "8-9", "--out", path("w")});
  const auto r = run(sw);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto sweep = nlohmann::json::parse(emw::read_text_file(path("w") + "/sweep.json"));
  const auto analysis = nlohmann::json::parse(emw::read_text_file(path("s") + "/analysis.json"));
  double peak = 0;
  for (double p : analysis["peak_chi"]) peak = std::max(peak, p);
  EXPECT_EQ(sweep["runs"][0]["peak_chi"].get<double>(), peak);
  EXPECT_TRUE(fs::exists(path("w") + "/run_0/manifest.json"));
}

TEST_F(CliTest, SweepInertiaOnTwoBus) {
  const auto r = run({"sweep", data_path("two_bus.json"), data_path("scenarios/two_bus_load_step.json"), "--param", "h",
                      "--values", "1.5,15", "--t-end", "1.5", "--jobs", "2", "--out", path("h")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(emw::read_text_file(path("h") + "/sweep.json"));
  EXPECT_GT(j["runs"][0]["peak_chi"].get<double>(), j["runs"][1]["peak_chi"].get<double>());
  EXPECT_EQ(run({"sweep", data_path("two_bus.json"), data_path("scenarios/two_bus_load_step.json"), "--param",
                 "length", "--values", "2"})
                .code,
            2);
}

TEST_F(CliTest, AnalyzeAndPlot) {
  const auto r = run({"simulate", data_path("two_bus.json"), data_path("scenarios/two_bus_load_step.json"), "--t-end",
                      "1.2", "--out", path("s")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = path("s") + "/wavefield.csv";
  const auto a = run({"analyze", csv});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_TRUE(nlohmann::json::parse(a.out).contains("front_velocity"));
  const auto cmp = run({"analyze", csv, "--compare", csv});
  ASSERT_EQ(cmp.code, 0) << cmp.err;
  EXPECT_EQ(nlohmann::json::parse(cmp.out)["divergence"]["summary_l2_chi"].get<double>(), 0.0);

  for (const char* kind : {"surface", "profile", "timeseries"}) {
    const std::string svg = path(std::string(kind) + ".svg");
    const auto p = run({"plot", csv, "--kind", kind, "--out", svg});
    ASSERT_EQ(p.code, 0) << p.err;
    const std::string text = emw::read_text_file(svg);
    EXPECT_EQ(text.rfind("<svg", 0), 0u);
    EXPECT_NE(text.find("</svg>"), std::string::npos);
  }
  const std::string prof = emw::read_text_file(path("profile.svg"));
  EXPECT_NE(prof.find("xi (miles)"), std::string::npos);
  EXPECT_NE(prof.find("<polyline"), std::string::npos);
  EXPECT_NE(emw::read_text_file(path("surface.svg")).find("t (s)"), std::string::npos);
  EXPECT_EQ(run({"plot", csv, "--kind", "pie", "--out", path("x.svg")}).code, 1);
  EXPECT_EQ(run({"plot", csv, "--kind", "profile", "--at", "100", "--out", path("x.svg")}).code, 1);
  EXPECT_EQ(run({"plot", path("nope.csv"), "--kind", "surface", "--out", path("x.svg")}).code, 2);
}
