// Copyright 2026 The Cheshire Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cheshire/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace cheshire::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "cheshire");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string config(const char* name) { return std::string(CHESHIRE_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CommandsTest : public ::testing::Test {
 protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("cheshire_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const char* name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST_F(CommandsTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"bogus"}).code, kExitUsage);
    EXPECT_EQ(run({"sweep", "--format", "xml"}).code, kExitUsage);
    EXPECT_EQ(run({"sweep", "--svg"}).code, kExitUsage);
    EXPECT_EQ(run({"sweep", "--config", "/nonexistent.yaml"}).code, kExitUsage);
    EXPECT_EQ(run({"fresnel", "--n", "-1"}).code, kExitUsage);
    EXPECT_EQ(run({"analyze"}).code, kExitUsage);
    const Result r = run({"sweep", "--frobnicate"});
    EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
    EXPECT_EQ(count_lines(r.err), 1u);
}

TEST_F(CommandsTest, HelpExitsZero) {
    const Result r = run({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("reproduce-paper"), std::string::npos);
}

TEST_F(CommandsTest, SweepWritesCsvToStdout) {
    const Result r = run({"sweep"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("phase_rad,probability\n", 0), 0u);
    EXPECT_EQ(count_lines(r.out), 51u);
    std::istringstream rows(r.out);
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        EXPECT_NEAR(std::stod(line.substr(line.find(',') + 1)), 0.25, 1e-12) << line;
    }
}

TEST_F(CommandsTest, SweepJson) {
    const Result r = run({"sweep", "--format", "json", "--config", config("rotation_arm1.yaml")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 50u);
    EXPECT_DOUBLE_EQ(j[0]["phase_rad"].get<double>(), 0.0);
    EXPECT_GT(j[0]["probability"].get<double>(), 0.0);
}

TEST_F(CommandsTest, OutputWritesManifestAndSvg) {
    const Result r = run({"sweep", "--config", config("filter_arm2.yaml"), "--out", path("s.csv"), "--svg"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(path("s.csv")).rfind("phase_rad,probability\n", 0), 0u);
    EXPECT_EQ(slurp(path("s.svg")).rfind("<svg", 0), 0u);
    const auto m = nlohmann::json::parse(slurp(path("s.manifest.json")));
    EXPECT_EQ(m["command"], "sweep");
    EXPECT_EQ(m["config_sha256"], config_digest(load_config(config("filter_arm2.yaml"))));
    EXPECT_EQ(m["seed"], 12);
    EXPECT_EQ(m["version"], CHESHIRE_TEST_VERSION);
    EXPECT_EQ(m["timestamp_utc"].get<std::string>().size(), 20u);
    EXPECT_EQ(m["outputs"].size(), 2u);
}

TEST_F(CommandsTest, MontecarloIsSeedDeterministic) {
    const Result a = run({"montecarlo", "--seed", "5"});
    const Result b = run({"montecarlo", "--seed", "5"});
    const Result c = run({"montecarlo", "--seed", "6"});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out.rfind("phase_rad,counts,duration_s\n", 0), 0u);
    EXPECT_EQ(count_lines(a.out), 51u);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
}

TEST_F(CommandsTest, MontecarloSeedFallsBackToConfig) {
    const Result a = run({"montecarlo", "--config", config("filter_arm2.yaml")});
    const Result b = run({"montecarlo", "--seed", "12"});
    ASSERT_EQ(a.code, kExitOk);
    const Result c = run({"montecarlo", "--config", config("filter_arm2.yaml"), "--seed", "12"});
    EXPECT_EQ(a.out, c.out);
    EXPECT_NE(a.out, b.out);
}

TEST_F(CommandsTest, AnalyzeRecoversPresenceWeakValue) {
    ASSERT_EQ(run({"montecarlo", "--seed", "1", "--out", path("ref.csv")}).code, kExitOk);
    ASSERT_EQ(run({"montecarlo", "--config", config("filter_arm2.yaml"), "--out", path("f2.csv")}).code, kExitOk);
    const Result r = run({"analyze", path("f2.csv"), "--reference", path("ref.csv"), "--config",
                          config("filter_arm2.yaml"), "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["re_pi_2"]["value"].get<double>(), 1.0, 0.1);
    EXPECT_GT(j["re_pi_2"]["uncertainty"].get<double>(), 0.0);
    EXPECT_LT(j["visibility"]["value"].get<double>(), 0.1);
}

TEST_F(CommandsTest, AnalyzeRecoversPolarizationWeakValue) {
    ASSERT_EQ(run({"montecarlo", "--config", config("rotation_arm1.yaml"), "--out", path("r.csv")}).code, kExitOk);
    const Result r = run({"analyze", path("r.csv"), "--config", config("rotation_arm1.yaml")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("quantity,value,uncertainty\n", 0), 0u);
    EXPECT_NE(r.out.find("\nabs_sigma_pi_1,"), std::string::npos);
    EXPECT_NE(r.out.find("\nabs_sigma_pi_1_first_order,"), std::string::npos);
}

TEST_F(CommandsTest, AnalyzeCountsMatchesDirectFit) {
    RunConfig cfg;
    cfg.theta1_deg = 20.0;
    cfg.visibility_scale = 1.0;
    const auto recs = simulate_sweep(cfg.experiment_config(), cfg.source_model(), {}, 3);
    const CountsAnalysis a = analyze_counts(cfg, recs, nullptr);
    EXPECT_EQ(a.fit.visibility, fit_fringe(recs).visibility);
    ASSERT_TRUE(a.sigma_weak.has_value());
    EXPECT_NEAR(a.sigma_weak->value, 1.0, 0.3);
    EXPECT_FALSE(a.pi_weak.has_value());
}

TEST_F(CommandsTest, MalformedCountsExitTwo) {
    {
        std::ofstream(path("bad.csv")) << "phase_rad,counts,duration_s\n0,12,5\n0.1,abc,5\n";
    }
    const Result r = run({"analyze", path("bad.csv")});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find(":3:"), std::string::npos) << r.err;
    {
        std::ofstream(path("hdr.csv")) << "phase,counts\n0,1\n";
    }
    EXPECT_EQ(run({"analyze", path("hdr.csv")}).code, kExitUsage);
    EXPECT_EQ(run({"analyze", path("missing.csv")}).code, kExitUsage);
}

TEST_F(CommandsTest, DegenerateCountsAreRuntimeFailure) {
    {
        std::ofstream(path("few.csv")) << "phase_rad,counts,duration_s\n0,12,5\n0.1,13,5\n";
    }
    EXPECT_EQ(run({"analyze", path("few.csv")}).code, kExitRuntime);
}

TEST_F(CommandsTest, FresnelDefaultsToBrewster) {
    const Result r = run({"fresnel", "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["brewster_deg"].get<double>(), 56.309932474020215, 1e-9);
    EXPECT_NEAR(j["reflectance_s"].get<double>(), 0.14792899408284, 1e-12);
    EXPECT_NEAR(j["reflectance_p"].get<double>(), 0.0, 1e-15);
    const Result n = run({"fresnel", "--theta-deg", "0"});
    const auto jn = nlohmann::json::parse(run({"fresnel", "--theta-deg", "0", "--format", "json"}).out);
    EXPECT_NEAR(jn["reflectance_s"].get<double>(), 0.04, 1e-15);
    EXPECT_NEAR(jn["reflectance_p"].get<double>(), 0.04, 1e-15);
    EXPECT_EQ(n.out.rfind("refractive_index,incidence_deg,", 0), 0u);
}

TEST_F(CommandsTest, ReproduceWritesArtifacts) {
    {
        std::ofstream(path("small.yaml")) << "phase: {points: 20}\nanalysis: {ensemble_seeds: 3}\nseed: 4\n";
    }
    const std::string out = path("repro");
    const Result r = run({"reproduce-paper", "--config", path("small.yaml"), "--out", out});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("| quantity |"), std::string::npos);
    for (const char* f : {"table.csv", "table.md", "config.yaml", "manifest.json", "fig_presence.svg",
                          "fig_rotation_arm1.svg", "fig_rotation_arm2.svg", "fig_simultaneous_filter1.svg",
                          "fig_simultaneous_filter2.svg"}) {
        EXPECT_TRUE(fs::exists(fs::path(out) / f)) << f;
    }
    EXPECT_EQ(slurp(fs::path(out) / "table.csv").rfind("quantity,predicted,simulated_mean", 0), 0u);
    const Result again = run({"reproduce-paper", "--config", path("small.yaml"), "--out", out});
    EXPECT_EQ(again.out, r.out);
}

TEST_F(CommandsTest, ComparisonTableHasPredictions) {
    RunConfig cfg;
    cfg.ensemble_seeds = 4;
    const auto rows = comparison_table(cfg, 9);
    ASSERT_GE(rows.size(), 9u);
    EXPECT_EQ(rows[0].quantity, "Re<Pi_1>_w");
    EXPECT_NEAR(rows[0].simulated_mean, 0.0, 0.1);
    EXPECT_NEAR(rows[1].simulated_mean, 1.0, 0.1);
    EXPECT_NEAR(rows[3].predicted, 0.14792899408284, 1e-12);
    for (const TableRow& r : rows) EXPECT_GT(r.simulated_sd, 0.0) << r.quantity;
}

}  // namespace
}  // namespace cheshire::cli
