#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "plate/checks.hpp"
#include "plate/csv.hpp"
#include "plate/scenario.hpp"

namespace plate::cli {

namespace {

class Report {
 public:
  explicit Report(std::ostream& log) : log_(log) {}
  void check(const std::string& name, bool pass, const std::string& detail) {
    log_ << (pass ? "PASS " : "FAIL ") << std::left << std::setw(28) << name << ' ' << detail
         << '\n';
    failures_ += pass ? 0 : 1;
  }
  int failures() const { return failures_; }

 private:
  std::ostream& log_;
  int failures_ = 0;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

}  // namespace

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out, const std::string& hash,
               std::ostream& log) {
  (void)hash;
  Report rep(log);
  const DimensionlessParams d = cfg.dimensionless();
  const Grid1D g{static_cast<std::size_t>(std::lround(1.0 / cfg.dx)) + 1};

  const double riemann = riemann_roundtrip_error(d, g, 20, 11);
  rep.check("riemann_roundtrip", riemann <= 1e-10, "max error " + num(riemann) + " <= 1e-10");
  const double modal = modal_roundtrip_error(cfg.modes, d.L, cfg.y_points, 20, 12);
  rep.check("modal_roundtrip", modal <= 1e-10, "max error " + num(modal) + " <= 1e-10");

  const double bound = 10.0 / (cfg.kernel_m - 1);
  RunConfig short_run = cfg;
  short_run.scenario = Scenario::kStateFeedback;
  short_run.T = std::min(cfg.T, 0.5);
  short_run.snapshot_times.clear();
  for (int n = 0; n <= cfg.modes; ++n) {
    RunConfig both = cfg;
    both.scenario = Scenario::kOutputFeedback;
    const ModeSetup s = prepare_mode(both, n);
    const std::string tag = "_n" + std::to_string(n);

    const ResidualReport rc = kernel_residual(*s.kernels, *s.coef);
    rep.check("controller_residual" + tag, rc.max_pde() <= bound && rc.max_boundary() <= bound,
              "pde " + num(rc.max_pde()) + ", boundary " + num(rc.max_boundary()) + " <= " +
                  num(bound));
    const ResidualReport ro = kernel_residual(*s.observer, *s.coef);
    rep.check("observer_residual" + tag, ro.max_pde() <= bound && ro.max_boundary() <= bound,
              "pde " + num(ro.max_pde()) + ", boundary " + num(ro.max_boundary()) + " <= " +
                  num(bound));

    const double e1 = e1_diagonal_error(*s.kernels, *s.coef);
    rep.check("e1_diagonal" + tag, e1 <= 1e-14, "max deviation " + num(e1) + " <= 1e-14");

    const double dual = dual_gain_deviation(*s.kernels, d, n, g, 20, 100 + n, true);
    rep.check("dual_gain" + tag, dual <= 1e-6, "max relative deviation " + num(dual) + " <= 1e-6");

    ModeSetup sf = s;
    sf.observer.reset();
    const ModeSeries series = run_mode(short_run, sf);
    const double s1 = *std::max_element(series.sigma_end.begin(), series.sigma_end.end());
    rep.check("target_boundary" + tag, s1 <= 1e-8, "max |sigma(t,1)| " + num(s1) + " <= 1e-8");
    rep.check("lyapunov_monitor" + tag, series.lyapunov_violations == 0,
              std::to_string(series.lyapunov_violations) + " violations over t <= " +
                  num(short_run.T));

    const std::filesystem::path file = out / ("kernels_" + std::to_string(n) + ".csv");
    if (std::filesystem::exists(file)) {
      std::string why;
      try {
        why = compare_kernel_records(read_kernels(file), kernel_records(*s.kernels, s.observer.get()));
      } catch (const std::exception& e) {
        why = e.what();
      }
      rep.check("kernel_file" + tag, why.empty(), why.empty() ? file.string() : why);
    }
  }
  log << rep.failures() << " failed\n";
  return rep.failures() == 0 ? kExitOk : kExitVerify;
}

}  // namespace plate::cli
