#include "c3bf/cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using c3bf::cli::run_cli;

namespace {

const std::string kScenarios = C3BF_SCENARIO_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "c3bf_cli_test" / name;
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

fs::path scenario_file(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / "c3bf_cli_test";
  fs::create_directories(dir);
  std::ofstream(dir / name) << text;
  return dir / name;
}

}  // namespace

TEST(CliRun, NaiveHeadOnIsCollisionFree) {
  fs::path out = fresh_dir("run_naive");
  Result r = cli({"run", "--scenario", kScenarios + "/head_on.json", "--out", out.string()});
  EXPECT_EQ(r.code, c3bf::cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("min_separation="), std::string::npos);
  EXPECT_NE(r.out.find("control_effort="), std::string::npos);
  EXPECT_NE(r.out.find("filter_active_fraction="), std::string::npos);
  EXPECT_EQ(line_count(out / "trajectory.csv"), 8001u + 1u);
  EXPECT_NE(slurp(out / "metrics.txt").find("collision: false"), std::string::npos);
}

TEST(CliRun, UnfilteredCollides) {
  fs::path out = fresh_dir("run_none");
  Result r = cli({"run", "--scenario", kScenarios + "/head_on.json", "--out", out.string(), "--override",
                  "filter_kind=none"});
  EXPECT_EQ(r.code, c3bf::cli::kExitCollision);
  EXPECT_NE(r.out.find("collision=true"), std::string::npos);
}

TEST(CliRun, MissingFileNamesPath) {
  Result r = cli({"run", "--scenario", "/no/such/file.json", "--out", fresh_dir("missing").string()});
  EXPECT_EQ(r.code, c3bf::cli::kExitError);
  EXPECT_NE(r.err.find("/no/such/file.json"), std::string::npos);
}

TEST(CliRun, ShorthandsAreOverrides) {
  fs::path a = fresh_dir("short_a"), b = fresh_dir("short_b");
  Result ra = cli({"run", "--scenario", kScenarios + "/static.json", "--out", a.string(), "--dt", "0.02", "--tmax",
                   "5", "--filter", "baseline"});
  Result rb = cli({"run", "--scenario", kScenarios + "/static.json", "--out", b.string(), "--override", "dt=0.02",
                   "--override", "t_max=5", "--override", "filter_kind=baseline"});
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0) << rb.err;
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(line_count(a / "trajectory.csv"), 252u);
  EXPECT_NE(slurp(a / "metrics.txt").find("filter_kind: baseline"), std::string::npos);
}

TEST(CliRun, ByteIdenticalOutputs) {
  fs::path a = fresh_dir("repeat_a"), b = fresh_dir("repeat_b");
  cli({"run", "--scenario", kScenarios + "/crossing.json", "--out", a.string(), "--tmax", "40"});
  cli({"run", "--scenario", kScenarios + "/crossing.json", "--out", b.string(), "--tmax", "40"});
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(slurp(a / "metrics.txt"), slurp(b / "metrics.txt"));
}

TEST(CliRun, SaturationWarns) {
  Result r = cli({"run", "--scenario", kScenarios + "/static.json", "--out", fresh_dir("sat").string(), "--tmax",
                  "2", "--override", "saturation.enabled=true", "--override", "saturation.q=0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(CliRun, UnknownOverrideKey) {
  Result r = cli({"run", "--scenario", kScenarios + "/static.json", "--out", fresh_dir("bad_key").string(),
                  "--override", "kappa.beta=1"});
  EXPECT_EQ(r.code, c3bf::cli::kExitError);
  EXPECT_NE(r.err.find("kappa.beta"), std::string::npos);
}

TEST(CliRun, UsageErrors) {
  EXPECT_EQ(cli({}).code, c3bf::cli::kExitError);
  EXPECT_EQ(cli({"fly"}).code, c3bf::cli::kExitError);
  EXPECT_EQ(cli({"run"}).code, c3bf::cli::kExitError);
  EXPECT_EQ(cli({"--help"}).code, c3bf::cli::kExitOk);
}

TEST(CliCompare, FilterListOnOneScenario) {
  fs::path out = fresh_dir("compare");
  Result r = cli({"compare", "--scenario", kScenarios + "/static.json", "--filter", "naive,backstepped,baseline",
                  "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"naive", "backstepped", "baseline"}) {
    EXPECT_TRUE(fs::exists(out / name / "trajectory.csv")) << name;
    EXPECT_TRUE(fs::exists(out / name / "metrics.txt")) << name;
  }
  std::stringstream csv(slurp(out / "comparison.csv"));
  std::string header, row;
  std::getline(csv, header);
  EXPECT_EQ(header, "metric,naive,backstepped,baseline,delta_backstepped,delta_baseline");
  bool saw_effort_rank = false, saw_difference = false;
  while (std::getline(csv, row)) {
    if (row.rfind("control_effort_rank,", 0) == 0) {
      EXPECT_EQ(row, "control_effort_rank,1,1,3,0,2");
      saw_effort_rank = true;
    }
    if (row.rfind("max_position_difference_vs_first,", 0) == 0) {
      std::stringstream cells(row);
      std::string cell;
      std::vector<std::string> v;
      while (std::getline(cells, cell, ',')) v.push_back(cell);
      ASSERT_EQ(v.size(), 6u);
      EXPECT_LT(std::stod(v[2]), 1e-6);
      EXPECT_LT(std::stod(v[4]), 1e-6);
      saw_difference = true;
    }
  }
  EXPECT_TRUE(saw_effort_rank);
  EXPECT_TRUE(saw_difference);
}

TEST(CliCompare, TwoFilesWithMatchingEncounter) {
  fs::path base = scenario_file("gamma2.json", slurp(kScenarios + "/static.json"));
  Result r = cli({"compare", "--scenario", kScenarios + "/static.json", "--scenario", base.string(), "--override",
                  "kappa.gamma=2", "--out", fresh_dir("compare_files").string(), "--tmax", "10"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("static:"), std::string::npos);
  // Both files carry the name "static"; the second gets a suffix.
  EXPECT_NE(r.out.find("static_1:"), std::string::npos);
}

TEST(CliCompare, SingleConfigIsUsageError) {
  Result r = cli({"compare", "--scenario", kScenarios + "/static.json", "--out", fresh_dir("single").string()});
  EXPECT_EQ(r.code, c3bf::cli::kExitError);
  EXPECT_NE(r.err.find("at least two"), std::string::npos);
}

TEST(CliCompare, MismatchedEncountersFail) {
  Result r = cli({"compare", "--scenario", kScenarios + "/static.json", "--scenario", kScenarios + "/crossing.json",
                  "--out", fresh_dir("mismatch").string()});
  EXPECT_EQ(r.code, c3bf::cli::kExitError);
  EXPECT_NE(r.err.find("obstacles differ"), std::string::npos);
}

TEST(CliSweep, ObstacleSpeedHeadOn) {
  fs::path out = fresh_dir("sweep");
  Result r = cli({"sweep", "--scenario", kScenarios + "/head_on.json", "--param", "obstacles.0.velocity.0=0,-5,-10",
                  "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream csv(slurp(out / "sweep.csv"));
  std::string header, row;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("obstacles.0.velocity.0,status,min_separation,", 0), 0u) << header;
  std::vector<std::string> first_cells;
  while (std::getline(csv, row)) {
    EXPECT_NE(row.find(",ok,"), std::string::npos) << row;
    first_cells.push_back(row.substr(0, row.find(',')));
  }
  EXPECT_EQ(first_cells, (std::vector<std::string>{"0", "-5", "-10"}));
}

TEST(CliSweep, TwoByTwoGrid) {
  fs::path out = fresh_dir("sweep2");
  Result r = cli({"sweep", "--scenario", kScenarios + "/static.json", "--param", "kappa.gamma=1,2", "--param",
                  "dt=0.01,0.02", "--tmax", "3", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(out / "sweep.csv"), 5u);
  std::stringstream csv(slurp(out / "sweep.csv"));
  std::string row;
  std::getline(csv, row);
  std::vector<std::string> keys;
  while (std::getline(csv, row)) keys.push_back(row.substr(0, row.find(',', row.find(',') + 1)));
  EXPECT_EQ(keys, (std::vector<std::string>{"1,0.01", "1,0.02", "2,0.01", "2,0.02"}));
}

TEST(CliSweep, EmptyListAndUnknownKeyFail) {
  EXPECT_EQ(cli({"sweep", "--scenario", kScenarios + "/static.json", "--param", "dt=", "--out",
                 fresh_dir("sweep_empty").string()})
                .code,
            c3bf::cli::kExitError);
  EXPECT_EQ(cli({"sweep", "--scenario", kScenarios + "/static.json", "--param", "bogus=1,2", "--out",
                 fresh_dir("sweep_unknown").string()})
                .code,
            c3bf::cli::kExitError);
}

TEST(CliValidate, DefaultsEchoed) {
  fs::path p = scenario_file("one_obstacle.json", R"({"obstacles": [{"center": [1000, 0, 0]}]})");
  Result r = cli({"validate", "--scenario", p.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"gamma\": 1.0"), std::string::npos);
  EXPECT_NE(r.out.find("\"lambda\": 0.0001"), std::string::npos);
  EXPECT_NE(r.out.find("obstacles.0.collision_radius: 100"), std::string::npos);
}

TEST(CliValidate, InsideSphereNamesInvariant) {
  fs::path p = scenario_file("inside.json", R"({"obstacles": [{"center": [50, 0, 0]}]})");
  Result r = cli({"validate", "--scenario", p.string()});
  EXPECT_EQ(r.code, c3bf::cli::kExitError);
  EXPECT_NE(r.err.find("outside the collision sphere"), std::string::npos);
}

TEST(CliValidate, NegativeDt) {
  Result r = cli({"validate", "--scenario", kScenarios + "/static.json", "--dt", "-0.01"});
  EXPECT_EQ(r.code, c3bf::cli::kExitError);
  EXPECT_NE(r.err.find("dt must be positive"), std::string::npos);
}
