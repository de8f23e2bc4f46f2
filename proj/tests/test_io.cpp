#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "plate/checks.hpp"
#include "plate/config.hpp"
#include "plate/csv.hpp"
#include "plate/errors.hpp"
#include "plate/scenario.hpp"

using namespace plate;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("plate_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0 || line.rfind(key + "=", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

bool message_has(const std::exception& e, const std::string& s) {
  return std::string(e.what()).find(s) != std::string::npos;
}

}  // namespace

TEST(Config, ShippedProfileResolvesToReference) {
  const RunConfig cfg = run_config_from(KeyValueConfig::load(PLATE_PROFILE_DIR "/reference.conf"));
  EXPECT_EQ(to_key_value_text(cfg), to_key_value_text(reference_run_config()));
  const DimensionlessParams d = cfg.dimensionless();
  EXPECT_DOUBLE_EQ(d.eps, 3.0);
  EXPECT_DOUBLE_EQ(d.xi, 0.2);
}

TEST(Config, TextRoundTrip) {
  RunConfig cfg = reference_run_config();
  cfg.dt = 0.0005;
  cfg.modes = 2;
  cfg.scenario = Scenario::kOpenLoop;
  const std::string text = to_key_value_text(cfg);
  EXPECT_EQ(to_key_value_text(run_config_from(KeyValueConfig::parse(text))), text);
}

TEST(Config, MissingPhysicalKeyIsNamed) {
  const std::string text = without(to_key_value_text(reference_run_config()), "G_star");
  try {
    run_config_from(KeyValueConfig::parse(text));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(message_has(e, "G_star")) << e.what();
  }
}

TEST(Config, OptionalKeysFallBack) {
  const std::string text = without(to_key_value_text(reference_run_config()), "dt");
  EXPECT_DOUBLE_EQ(run_config_from(KeyValueConfig::parse(text)).dt, 0.001);
}

TEST(Config, RejectsBadInput) {
  const std::string base = to_key_value_text(reference_run_config());
  EXPECT_THROW(run_config_from(KeyValueConfig::parse(base + "bogus = 1\n")), ConfigError);
  EXPECT_THROW(KeyValueConfig::parse("just words\n"), ConfigError);
  EXPECT_THROW(KeyValueConfig::parse("a = 1\na = 2\n"), ConfigError);
  KeyValueConfig kv = KeyValueConfig::parse(base);
  kv.set("dt", "fast");
  EXPECT_THROW(run_config_from(kv), ConfigError);
  kv = KeyValueConfig::parse(base);
  kv.set("scenario", "closed-loop");
  EXPECT_THROW(run_config_from(kv), ConfigError);
  EXPECT_THROW(KeyValueConfig::load("/nonexistent/plate.conf"), ConfigError);
}

TEST(Config, CflViolation) {
  KeyValueConfig kv = KeyValueConfig::parse(to_key_value_text(reference_run_config()));
  kv.set("dt", "0.1");
  kv.set("dx", "0.05");
  try {
    run_config_from(kv);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(message_has(e, "CFL")) << e.what();
  }
}

TEST(Config, CommentsAndBlankLines) {
  const KeyValueConfig kv = KeyValueConfig::parse("# header\n\nT = 2   # horizon\n  modes=1\n");
  EXPECT_EQ(kv.get("T"), "2");
  EXPECT_EQ(kv.get_int("modes"), 1);
}

TEST(Csv, KernelTablesRoundTripExactly) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c(d, 1);
  KernelOptions o;
  o.m = 11;
  const ControllerKernels k = solve_controller_kernels(c, Vec3::Constant(5.0), o);
  const ObserverKernels ob = solve_observer_kernels(c, Vec3::Constant(5.0), observer_reflection(d, false), o);
  const auto rows = kernel_records(k, &ob);
  const fs::path dir = scratch_dir("kernels");
  write_kernels(dir / "kernels_1.csv", rows, "abc123");
  const std::string text = slurp(dir / "kernels_1.csv");
  EXPECT_EQ(text.rfind("# manifest=abc123\nn,block,i,j,x,y,value\n", 0), 0u);
  const auto back = read_kernels(dir / "kernels_1.csv");
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(compare_kernel_records(back, rows, 0.0), "");
  for (const char* block : {"K", "L", "Phi", "Omega", "N", "M", "Pplus", "Pminus"}) {
    EXPECT_TRUE(std::any_of(rows.begin(), rows.end(), [&](const KernelRecord& r) { return r.block == block; }))
        << block;
  }
}

TEST(Csv, CorruptedKernelValueIsDetected) {
  const ModalCoefficients c(reference_profile(), 0);
  KernelOptions o;
  o.m = 11;
  auto rows = kernel_records(solve_controller_kernels(c, Vec3::Constant(5.0), o), nullptr);
  auto bad = rows;
  bad[17].value += 1e-6;
  EXPECT_NE(compare_kernel_records(bad, rows), "");
  bad = rows;
  bad.pop_back();
  EXPECT_NE(compare_kernel_records(bad, rows), "");
}

TEST(Csv, MalformedKernelFile) {
  const fs::path dir = scratch_dir("malformed");
  std::ofstream(dir / "a.csv") << "n,block,value\n0,K,1\n";
  EXPECT_THROW(read_kernels(dir / "a.csv"), ShapeError);
  std::ofstream(dir / "b.csv") << "n,block,i,j,x,y,value\n0,K,1,1,0.5,zero,1\n";
  EXPECT_THROW(read_kernels(dir / "b.csv"), ShapeError);
}

TEST(Csv, SnapshotNames) {
  EXPECT_EQ(snapshot_file_name(0.0), "snapshot_0.csv");
  EXPECT_EQ(snapshot_file_name(2.0), "snapshot_2.csv");
  EXPECT_EQ(snapshot_file_name(0.5), "snapshot_0.5.csv");
}

TEST(Csv, SeriesAndSnapshotLayout) {
  RunConfig cfg = reference_run_config();
  cfg.T = 0.02;
  cfg.modes = 1;
  cfg.kernel_m = 21;
  cfg.snapshot_times = {0.0};
  cfg.scenario = Scenario::kOutputFeedback;
  const ScenarioResult r = run_scenario(cfg);
  const fs::path dir = scratch_dir("series");
  write_series(dir / "series.csv", r);
  write_snapshot(dir / "snap.csv", r.snapshots.at(0));
  write_controls(dir / "controls.csv", r);
  write_errors(dir / "errors.csv", r);
  std::istringstream series(slurp(dir / "series.csv"));
  std::string header;
  std::getline(series, header);
  EXPECT_EQ(header.rfind("t,omega_0,omega_1,omega_a,omega_d,", 0), 0u) << header;
  int rows = 0;
  for (std::string line; std::getline(series, line);) ++rows;
  EXPECT_EQ(rows, 21);
  const std::string snap = slurp(dir / "snap.csv");
  EXPECT_EQ(snap.rfind("x,y,w,alpha,beta\n", 0), 0u);
  EXPECT_EQ(slurp(dir / "controls.csv").rfind("t,y,U1,U2,U3\n", 0), 0u);
  EXPECT_EQ(slurp(dir / "errors.csv").rfind("t,n,sigma_err,psi_err,X_err,Omega_nf\n", 0), 0u);
}
