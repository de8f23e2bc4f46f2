#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "plate/config.hpp"
#include "plate/control.hpp"
#include "plate/diagnostics.hpp"
#include "plate/kernels.hpp"
#include "plate/modal.hpp"
#include "plate/observer.hpp"
#include "plate/plant.hpp"

namespace plate {

/// Everything computed once per mode before time stepping.
struct ModeSetup {
  int n = 0;
  std::shared_ptr<const ModalCoefficients> coef;
  std::shared_ptr<const ControllerKernels> kernels;
  std::shared_ptr<const ObserverKernels> observer;  // output feedback only
  GainTables gains;
  LyapunovParams lyapunov;
};

ModeSetup prepare_mode(const RunConfig& cfg, int n);

/// Per-step history of one mode.
struct ModeSeries {
  int n = 0;
  std::vector<double> omega;      // Omega_n of the plant
  std::vector<double> omega_a;    // Parseval share of the plant in the 2-D norm
  std::vector<double> omega_est;  // same for the estimates (output feedback)
  std::vector<double> V;          // Lyapunov functional (feedback runs)
  std::vector<double> sigma_end;  // max |sigma(t, 1)|
  std::vector<Vec3> U_in;         // hyperbolic input actually applied at x = 1
  std::vector<Vec3> U_state;      // state-feedback input evaluated on the plant
  std::vector<Vec3> U_phys;       // shear force and moments at x = 1
  std::vector<ErrorNorms> errors; // output feedback only
  int lyapunov_violations = 0;
  double lyapunov_worst = 0.0;
  std::vector<PhysicalModalState> snapshots;  // one per snapshot time
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> x;
  PlateField2D field;
};

struct ControlSample {
  double t = 0.0;
  BoundaryTraces U;
};

struct ScenarioResult {
  RunConfig config;
  std::vector<double> t;
  std::vector<ModeSetup> setups;
  std::vector<ModeSeries> modes;
  std::vector<double> omega_a;  // 2-D norm of the plant
  std::vector<double> omega_d;  // plant plus estimates (output feedback)
  std::vector<Snapshot> snapshots;
  std::vector<ControlSample> controls;  // every trace_stride steps
  std::vector<double> y;

  std::size_t step_at(double time) const;
  /// Least-squares decay rate of Omega_a over the configured window.
  double decay_rate() const;
};

/// Runs the configured scenario for modes 0..N. Modes advance independently
/// on up to cfg.jobs threads; results are merged in mode order.
ScenarioResult run_scenario(const RunConfig& cfg);

/// Runs one mode with a prepared setup (used by run_scenario).
ModeSeries run_mode(const RunConfig& cfg, const ModeSetup& setup);

}  // namespace plate
