#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "plate/csv.hpp"
#include "plate/scenario.hpp"

namespace plate::cli {

namespace {

std::filesystem::path numbered(const std::filesystem::path& dir, const std::string& stem, int n) {
  return dir / (stem + "_" + std::to_string(n) + ".csv");
}

}  // namespace

int cmd_kernels(const RunConfig& cfg, const std::filesystem::path& out, const std::string& hash,
                std::ostream& log) {
  const double delta = 1.0 / (cfg.kernel_m - 1);
  const double bound = 10.0 * delta;
  bool ok = true;
  log << std::setprecision(3) << std::scientific;
  for (int n = 0; n <= cfg.modes; ++n) {
    RunConfig one = cfg;
    one.scenario = Scenario::kOutputFeedback;  // also solve the observer tables
    const ModeSetup s = prepare_mode(one, n);
    write_kernels(numbered(out, "kernels", n), kernel_records(*s.kernels, s.observer.get()), hash);
    write_gains(numbered(out, "gains", n), s.gains, hash);
    const ResidualReport rc = kernel_residual(*s.kernels, *s.coef);
    const ResidualReport ro = kernel_residual(*s.observer, *s.coef);
    for (const ResidualReport* r : {&rc, &ro}) {
      for (const BlockResidual& b : r->blocks) {
        const bool pass = b.pde <= bound && b.boundary <= bound;
        ok = ok && pass;
        log << "n=" << n << ' ' << std::setw(8) << b.block << "  pde " << b.pde << "  boundary "
            << b.boundary << "  " << (pass ? "ok" : "ABOVE 10*delta") << '\n';
      }
    }
  }
  return ok ? kExitOk : kExitVerify;
}

int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out, const std::string& hash,
                 std::ostream& log) {
  const ScenarioResult r = run_scenario(cfg);
  write_series(out / "series.csv", r, hash);
  for (const Snapshot& s : r.snapshots) write_snapshot(out / snapshot_file_name(s.t), s, hash);
  write_controls(out / "controls.csv", r, hash);
  if (cfg.scenario == Scenario::kOutputFeedback) write_errors(out / "errors.csv", r, hash);
  for (const ModeSetup& s : r.setups) {
    write_kernels(numbered(out, "kernels", s.n), kernel_records(*s.kernels, s.observer.get()), hash);
    write_gains(numbered(out, "gains", s.n), s.gains, hash);
  }
  const std::size_t last = r.t.size() - 1;
  log << std::setprecision(6) << "scenario " << to_string(cfg.scenario) << ", modes 0.."
      << cfg.modes << ", T = " << r.t[last] << '\n';
  log << std::scientific << "Omega_a(0) = " << r.omega_a[0] << ", Omega_a(T) = " << r.omega_a[last]
      << '\n';
  if (!r.omega_d.empty()) {
    log << "Omega_d(0) = " << r.omega_d[0] << ", Omega_d(T) = " << r.omega_d[last] << '\n';
  }
  if (cfg.fit_t1 <= cfg.T) {
    log << std::fixed << "decay rate over [" << cfg.fit_t0 << ", " << cfg.fit_t1
        << "] = " << r.decay_rate() << '\n';
  }
  return kExitOk;
}

}  // namespace plate::cli
