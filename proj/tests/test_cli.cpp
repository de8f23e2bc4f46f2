#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "manifest.hpp"

using namespace plate;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("plate_cli_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig quick_single_mode() {
  RunConfig cfg = reference_run_config();
  cfg.modes = 0;
  cfg.kernel_m = 21;
  return cfg;
}

}  // namespace

TEST(Manifest, HashMatchesGitBlobId) {
  // git hash-object of "hello\n" and of the empty file.
  EXPECT_EQ(cli::git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(cli::git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Manifest, WrittenWithConfigText) {
  const RunConfig cfg = quick_single_mode();
  const fs::path dir = scratch_dir("manifest");
  const cli::RunManifest m = cli::make_manifest("kernels", cfg, dir);
  cli::write_manifest(m);
  std::ifstream in(dir / "manifest.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  EXPECT_NE(text.find("# command=kernels\n"), std::string::npos);
  EXPECT_NE(text.find("# config_hash=" + m.hash + "\n"), std::string::npos);
  EXPECT_NE(text.find(to_key_value_text(cfg)), std::string::npos);
  EXPECT_EQ(m.hash, cli::git_blob_sha1(to_key_value_text(cfg)));
}

TEST(Commands, KernelsForSingleModeThenVerify) {
  const RunConfig cfg = quick_single_mode();
  const fs::path dir = scratch_dir("kernels");
  fs::create_directories(dir);
  std::ostringstream log;
  EXPECT_EQ(cli::cmd_kernels(cfg, dir, "h", log), cli::kExitOk) << log.str();
  EXPECT_TRUE(fs::exists(dir / "kernels_0.csv"));
  EXPECT_TRUE(fs::exists(dir / "gains_0.csv"));
  EXPECT_FALSE(fs::exists(dir / "kernels_1.csv"));

  std::ostringstream vlog;
  EXPECT_EQ(cli::cmd_verify(cfg, dir, "h", vlog), cli::kExitOk) << vlog.str();
  EXPECT_NE(vlog.str().find("PASS kernel_file_n0"), std::string::npos);

  // Replace the value of the last row.
  std::ifstream in(dir / "kernels_0.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  in.close();
  std::string text = ss.str();
  const std::size_t comma = text.find_last_of(',');
  text = text.substr(0, comma + 1) + "0.125\n";
  std::ofstream(dir / "kernels_0.csv") << text;

  std::ostringstream bad;
  EXPECT_EQ(cli::cmd_verify(cfg, dir, "h", bad), cli::kExitVerify);
  EXPECT_NE(bad.str().find("FAIL kernel_file_n0"), std::string::npos) << bad.str();
}

TEST(Commands, SimulateWritesReports) {
  RunConfig cfg = quick_single_mode();
  cfg.T = 0.05;
  cfg.snapshot_times = {0.0, 0.05};
  cfg.scenario = Scenario::kOutputFeedback;
  const fs::path dir = scratch_dir("simulate");
  fs::create_directories(dir);
  std::ostringstream log;
  EXPECT_EQ(cli::cmd_simulate(cfg, dir, "h", log), cli::kExitOk);
  for (const char* f : {"series.csv", "controls.csv", "errors.csv", "snapshot_0.csv",
                        "snapshot_0.05.csv", "kernels_0.csv", "gains_0.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
}
