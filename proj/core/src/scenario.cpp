#include "plate/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "plate/errors.hpp"

namespace plate {

namespace {

Grid1D output_grid(double dx) {
  const auto cells = static_cast<std::size_t>(std::lround(1.0 / dx));
  return Grid1D{cells + 1};
}

std::vector<std::size_t> snapshot_steps(const RunConfig& cfg) {
  std::vector<std::size_t> out;
  for (double t : cfg.snapshot_times) {
    if (t < 0.0 || t > cfg.T + 1e-12) continue;
    out.push_back(static_cast<std::size_t>(std::lround(t / cfg.dt)));
  }
  return out;
}

bool finite(const LatticeState& s) {
  if (!s.X.allFinite()) return false;
  for (const auto& f : s.f) {
    if (!f.allFinite()) return false;
  }
  return true;
}

[[noreturn]] void diverged(int n, std::size_t step) {
  std::ostringstream os;
  os << "mode " << n << " diverged at step " << step;
  throw DivergenceError(os.str());
}

}  // namespace

ModeSetup prepare_mode(const RunConfig& cfg, int n) {
  const DimensionlessParams d = cfg.dimensionless();
  ModeSetup s;
  s.n = n;
  s.coef = std::make_shared<const ModalCoefficients>(d, n);
  const KernelOptions opt{cfg.kernel_m, cfg.kernel_tol, cfg.kernel_max_iter};
  s.kernels = std::make_shared<const ControllerKernels>(
      solve_controller_kernels(*s.coef, cfg.delta, opt, cfg.phi32));
  if (cfg.scenario == Scenario::kOutputFeedback) {
    const Mat3 R = observer_reflection(d, cfg.observer_boundary == ObserverBoundary::kLiteral);
    s.observer = std::make_shared<const ObserverKernels>(
        solve_observer_kernels(*s.coef, cfg.observer_gain, R, opt));
  }
  s.gains = build_gain_tables(*s.kernels, d, n, output_grid(cfg.dx));
  s.lyapunov = lyapunov_params(*s.kernels, *s.coef);
  return s;
}

ModeSeries run_mode(const RunConfig& cfg, const ModeSetup& setup) {
  const ModalCoefficients& c = *setup.coef;
  const DimensionlessParams& d = c.params();
  const int n = setup.n;
  const auto lat = std::make_shared<const CharacteristicLattices>(c.Sigma().diagonal(), cfg.dt);
  const ModalTransport m(c, lat);
  const Grid1D g = output_grid(cfg.dx);
  const LatticeLaw law(*setup.kernels, *lat, g);
  const std::size_t steps = static_cast<std::size_t>(std::lround(cfg.T / cfg.dt));
  const std::vector<std::size_t> snaps = snapshot_steps(cfg);
  const bool feedback = cfg.scenario != Scenario::kOpenLoop;
  const bool output = cfg.scenario == Scenario::kOutputFeedback;

  const double a0 = cfg.field_amplitude, a1 = cfg.observer_field_amplitude;
  LatticeState plant = LatticeState::sample(
      *lat, [a0](int, double x) { return a0 * std::sin(std::numbers::pi * x); }, cfg.x0);
  LatticeState obs = LatticeState::sample(
      *lat, [a1](int, double x) { return a1 * std::sin(std::numbers::pi * x); }, cfg.observer_x0);

  std::optional<ModalObserver> ob;
  if (output) ob.emplace(*setup.observer, m, g);
  const Mat3 R = output ? ob->R() : Mat3::Zero();

  const InflowClosure open = free_end_closure(m);
  const InflowClosure state = [&law](const LatticeState& s) { return law.solve_inflow(s); };
  const ObserverClosure obs_closure = [&law](const LatticeState& o, const Measurements& meas) {
    return law.solve_inflow(o, -law.boundary_gain() * (meas.X - o.X));
  };
  const PlantClosure plant_closure = [R](const LatticeState& p, const LatticeState& o) {
    return Vec3(o.Z1() - R * o.Y1() + R * p.Y1());
  };

  // Inflow nodes follow the boundary relations at t = 0.
  if (output) {
    obs.set_Y0(m.inflow_y(plant.Z0(), plant.X));
    obs.set_Z1(obs_closure(obs, Measurements{plant.Z0(), plant.X}));
  }
  const InflowClosure plant_inflow = [&](const LatticeState& p) {
    if (output) return plant_closure(p, obs);
    return feedback ? state(p) : open(p);
  };
  plant.set_Y0(m.inflow_y(plant.Z0(), plant.X));
  plant.set_Z1(plant_inflow(plant));

  ModeSeries out;
  out.n = n;
  const std::size_t rows = steps + 1;
  out.omega.reserve(rows);
  out.omega_a.reserve(rows);
  out.U_in.reserve(rows);
  out.U_state.reserve(rows);
  out.U_phys.reserve(rows);
  LyapunovMonitor monitor(setup.lyapunov.cprime, cfg.dt);

  auto record = [&](std::size_t step) {
    const HyperbolicModalState h = to_grid(*lat, plant, g);
    const PhysicalModalState ph = to_physical(h, d);
    out.omega.push_back(modal_norm(ph));
    out.omega_a.push_back(plate_norm_term(ph, n, d.L));
    const Vec3 applied = plant.Z1() - R * plant.Y1();
    out.U_in.push_back(applied);
    out.U_state.push_back(law.solve_inflow(plant) - R * plant.Y1());
    out.U_phys.push_back(physical_inputs(applied, ph, d, n));
    if (feedback) {
      const Field3 sigma = law.target(*lat, plant);
      out.sigma_end.push_back(sigma.col(sigma.cols() - 1).cwiseAbs().maxCoeff());
      const double V = lyapunov_value(setup.lyapunov, c.SigmaInv(), *lat,
                                      law.target_on_lattice(*lat, plant), plant);
      out.V.push_back(V);
      monitor.push(V);
    }
    if (output) {
      const PhysicalModalState est = reconstruct_estimates(*lat, obs, g, d);
      out.omega_est.push_back(plate_norm_term(est, n, d.L));
      out.errors.push_back(error_diagnostics(*ob, plant, obs, d));
    }
    if (std::find(snaps.begin(), snaps.end(), step) != snaps.end()) out.snapshots.push_back(ph);
  };

  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    if (output) {
      coupled_step(*ob, plant, obs, plant_closure, obs_closure);
      if (!finite(obs)) diverged(n, step);
    } else {
      plant = plant_step(m, plant, feedback ? state : open);
    }
    if (!finite(plant)) diverged(n, step);
    record(step);
  }
  out.lyapunov_violations = monitor.violations();
  out.lyapunov_worst = monitor.worst_ratio();
  return out;
}

std::size_t ScenarioResult::step_at(double time) const {
  const auto k = static_cast<std::size_t>(std::lround(time / config.dt));
  return std::min(k, t.size() - 1);
}

double ScenarioResult::decay_rate() const {
  return fit_decay_rate(t, omega_a, config.fit_t0, config.fit_t1);
}

ScenarioResult run_scenario(const RunConfig& cfg) {
  cfg.validate();
  const int count = cfg.modes + 1;
  ScenarioResult r;
  r.config = cfg;
  r.setups.resize(static_cast<std::size_t>(count));
  r.modes.resize(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(count));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int n = next++; n < count; n = next++) {
      const auto i = static_cast<std::size_t>(n);
      try {
        r.setups[i] = prepare_mode(cfg, n);
        r.modes[i] = run_mode(cfg, r.setups[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(cfg.jobs > 0 ? cfg.jobs : count, 1, count);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  const DimensionlessParams d = cfg.dimensionless();
  const std::size_t rows = r.modes[0].omega.size();
  r.t.resize(rows);
  for (std::size_t k = 0; k < rows; ++k) r.t[k] = static_cast<double>(k) * cfg.dt;
  r.omega_a.assign(rows, 0.0);
  for (const ModeSeries& s : r.modes) {
    for (std::size_t k = 0; k < rows; ++k) r.omega_a[k] += s.omega_a[k];
  }
  if (cfg.scenario == Scenario::kOutputFeedback) {
    r.omega_d = r.omega_a;
    for (const ModeSeries& s : r.modes) {
      for (std::size_t k = 0; k < rows; ++k) r.omega_d[k] += s.omega_est[k];
    }
  }

  r.y = uniform_y_grid(cfg.y_points, d.L);
  const Grid1D g = output_grid(cfg.dx);
  const std::vector<std::size_t> snaps = snapshot_steps(cfg);
  for (std::size_t j = 0; j < snaps.size(); ++j) {
    ModalSeries ms;
    ms.N = cfg.modes;
    ms.L = d.L;
    for (Eigen::MatrixXd* mat : {&ms.w, &ms.alpha, &ms.beta, &ms.w_t, &ms.alpha_t, &ms.beta_t}) {
      mat->resize(count, static_cast<Eigen::Index>(g.n));
    }
    for (int n = 0; n < count; ++n) {
      const PhysicalModalState& p = r.modes[static_cast<std::size_t>(n)].snapshots[j];
      ms.w.row(n) = p.w.transpose();
      ms.alpha.row(n) = p.alpha.transpose();
      ms.beta.row(n) = p.beta.transpose();
      ms.w_t.row(n) = p.w_t.transpose();
      ms.alpha_t.row(n) = p.alpha_t.transpose();
      ms.beta_t.row(n) = p.beta_t.transpose();
    }
    r.snapshots.push_back(Snapshot{static_cast<double>(snaps[j]) * cfg.dt, g.nodes(),
                                   reconstruct(ms, r.y)});
  }

  const auto stride = static_cast<std::size_t>(cfg.trace_stride);
  for (std::size_t k = 0; k < rows; k += stride) {
    std::vector<Vec3> per_mode;
    for (const ModeSeries& s : r.modes) per_mode.push_back(s.U_phys[k]);
    r.controls.push_back(ControlSample{r.t[k], sum_modal_inputs(per_mode, r.y, d.L)});
  }
  return r;
}

}  // namespace plate
