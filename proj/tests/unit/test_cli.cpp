#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nls/trajectory_io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + NLS_LAB_BIN + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nls_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

const std::string kConfigs = NLS_CONFIG_DIR;

const char* kSmall = R"(
[model]
lambda = 1.0
eta = 1
dims = 1
q = 1
[grid]
L = 40.0
n = 256
[initial]
family = "gaussian"
A = 1.2
sigma = 1.0
v = [1.0]
[stepper]
dt = 1e-2
t_final = 1.0
[diagnostics]
local_residuals = true
morawetz_22 = true
decay_fit = true
)";

}  // namespace

TEST(Cli, RunSolitonWritesArtifacts) {
  const fs::path out = scratch("soliton");
  ASSERT_EQ(run("run " + kConfigs + "/soliton.toml --out " + out.string()), 0);
  for (const char* f : {"manifest.json", "diagnostics.csv", "analytics.json", "snapshots/snap_00000.nlsf"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(m["status"], "Completed");
  EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
  const auto rows = read_csv(out / "diagnostics.csv");
  ASSERT_GT(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "t");
  EXPECT_EQ(rows[0][1], "mass");
  const double m0 = std::stod(rows[1][1]);
  double worst = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) worst = std::max(worst, std::abs(std::stod(rows[i][1]) - m0) / m0);
  EXPECT_LT(worst, 1e-10);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("codes");
  EXPECT_EQ(run("run " + (dir / "missing.toml").string() + " --out " + dir.string()), 2);
  const auto bad = write(dir, "bad.toml", "[model]\ndims = 2\nq = 1\n");
  EXPECT_EQ(run("run " + bad.string() + " --out " + (dir / "o").string()), 2);
  const auto broken = write(dir, "broken.toml", "[model\n");
  EXPECT_EQ(run("run " + broken.string()), 2);
  const auto tail = write(dir, "tail.toml", "[grid]\nL = 6.0\nn = 64\n[initial]\nsigma = 3.0\n");
  EXPECT_EQ(run("run " + tail.string() + " --out " + (dir / "t").string()), 3);
  const auto ok = write(dir, "ok.toml", std::string(kSmall));
  write(dir, "blocker", "x");
  EXPECT_EQ(run("run " + ok.string() + " --out " + (dir / "blocker" / "sub").string()), 4);
  EXPECT_EQ(run("verify nonsense"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("diagnose " + (dir / "nowhere").string()), 4);
}

TEST(Cli, BlowUpIsNotAnError) {
  const fs::path out = scratch("blowup");
  ASSERT_EQ(run("run " + kConfigs + "/blowup.toml --out " + out.string()), 0);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(m["status"], "BlowUpDetected");
  EXPECT_LT(m["status_time"].get<double>(), 1.0);
}

TEST(Cli, VerifySuite) {
  const fs::path out = scratch("verify");
  EXPECT_EQ(run("verify grid --out " + out.string()), 0);
  const auto j = nlohmann::json::parse(slurp(out / "verify.json"));
  ASSERT_GT(j.size(), 3u);
  for (const auto& r : j) {
    EXPECT_TRUE(r["passed"].get<bool>()) << r["name"];
    EXPECT_EQ(r["suite"], "grid");
  }
}

TEST(Cli, DeterministicCsvAcrossThreadCounts) {
  const fs::path dir = scratch("determinism");
  const auto cfg = write(dir, "c.toml", std::string(kSmall));
  ASSERT_EQ(run("run " + cfg.string() + " --out " + (dir / "a").string(), "NLS_LAB_THREADS=1"), 0);
  ASSERT_EQ(run("run " + cfg.string() + " --out " + (dir / "b").string(), "NLS_LAB_THREADS=4"), 0);
  ASSERT_EQ(run("run " + cfg.string() + " --out " + (dir / "c").string()), 0);
  const std::string a = slurp(dir / "a" / "diagnostics.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir / "b" / "diagnostics.csv"));
  EXPECT_EQ(a, slurp(dir / "c" / "diagnostics.csv"));
  EXPECT_EQ(slurp(dir / "a" / "analytics.json"), slurp(dir / "b" / "analytics.json"));
}

TEST(Cli, ResumeReproducesRemainingTrajectory) {
  const fs::path dir = scratch("resume");
  const std::string text(kSmall);
  const auto full = write(dir, "full.toml", text);
  std::string half_text = text;
  half_text.replace(half_text.find("t_final = 1.0"), 13, "t_final = 0.5");
  const auto half = write(dir, "half.toml", half_text);
  ASSERT_EQ(run("run " + full.string() + " --out " + (dir / "full").string()), 0);
  ASSERT_EQ(run("run " + half.string() + " --out " + (dir / "half").string()), 0);
  ASSERT_EQ(run("run " + full.string() + " --resume " + (dir / "half").string() + " --out " + (dir / "rest").string()), 0);
  const nls::Trajectory a = nls::load_trajectory((dir / "full").string());
  const nls::Trajectory b = nls::load_trajectory((dir / "rest").string());
  EXPECT_NEAR(b.snapshots.front().time(), 0.5, 1e-12);
  EXPECT_NEAR(b.back().time(), 1.0, 1e-12);
  EXPECT_LT(oracle::l2_diff(a.back(), b.back()), 1e-10);
}

TEST(Cli, DiagnoseReproducesRun) {
  const fs::path dir = scratch("diagnose");
  const auto cfg = write(dir, "c.toml", std::string(kSmall));
  ASSERT_EQ(run("run " + cfg.string() + " --out " + (dir / "r").string()), 0);
  ASSERT_EQ(run("diagnose " + (dir / "r").string() + " --out " + (dir / "d").string()), 0);
  EXPECT_EQ(slurp(dir / "r" / "diagnostics.csv"), slurp(dir / "d" / "diagnostics.csv"));
  const auto a = nlohmann::json::parse(slurp(dir / "r" / "analytics.json"));
  const auto b = nlohmann::json::parse(slurp(dir / "d" / "analytics.json"));
  EXPECT_EQ(a, b);
}

TEST(Cli, SweepDtShowsSecondOrder) {
  const fs::path dir = scratch("sweep_dt");
  const auto cfg = write(dir, "c.toml", std::string(kSmall));
  ASSERT_EQ(run("sweep " + cfg.string() + " --axis dt --values 1e-2,5e-3,2.5e-3 --out " + dir.string()), 0);
  const auto rows = read_csv(dir / "sweep.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][5], "energy_drift");
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const double r = std::stod(rows[i - 1][5]) / std::stod(rows[i][5]);
    EXPECT_NEAR(r, 4.0, 0.8) << i;
  }
}

TEST(Cli, SweepLambdaConservesMomentum) {
  const fs::path dir = scratch("sweep_lambda");
  const auto cfg = write(dir, "c.toml", std::string(kSmall));
  ASSERT_EQ(run("sweep " + cfg.string() + " --axis lambda --values -2,0,2 --out " + dir.string()), 0);
  const auto rows = read_csv(dir / "sweep.csv");
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][3], "Completed");
    EXPECT_LT(std::stod(rows[i][6]), 1e-8);
  }
}

TEST(Cli, SweepThetaKeepsCriticalNorm) {
  const fs::path dir = scratch("sweep_theta");
  const auto cfg = write(dir, "c.toml", R"(
[model]
lambda = 1.0
eta = 2
dims = 3
q = 2
[grid]
L = 16.0
n = 32
[initial]
family = "gaussian"
sigma = 1.0
[stepper]
dt = 1e-3
t_final = 1e-2
[diagnostics]
pseudo_conformal = false
morawetz_11 = false
)");
  ASSERT_EQ(run("sweep " + cfg.string() + " --axis theta --values 0.8,1,1.25 --out " + dir.string()), 0);
  const auto rows = read_csv(dir / "sweep.csv");
  ASSERT_EQ(rows.size(), 4u);
  const double base = std::stod(rows[2][9]);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][9]), base, 1e-6 * base);
}

TEST(Cli, SweepRecordsPartialFailures) {
  const fs::path dir = scratch("sweep_partial");
  const auto cfg = write(dir, "c.toml", std::string(kSmall));
  ASSERT_EQ(run("sweep " + cfg.string() + " --axis sigma --values 1,30 --out " + dir.string()), 0);
  const auto rows = read_csv(dir / "sweep.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][3], "Completed");
  EXPECT_EQ(rows[2][3], "error");
  EXPECT_FALSE(rows[2][10].empty());
  EXPECT_EQ(run("sweep " + cfg.string() + " --axis sigma --values 30 --out " + dir.string()), 3);
  EXPECT_EQ(run("sweep " + cfg.string() + " --axis nope --values 1 --out " + dir.string()), 2);
}
