#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plate/checks.hpp"
#include "plate/modal.hpp"
#include "plate/observer.hpp"
#include "plate/scenario.hpp"

using namespace plate;

namespace {

RunConfig short_output_run(double T) {
  RunConfig cfg = reference_run_config();
  cfg.scenario = Scenario::kOutputFeedback;
  cfg.modes = 1;
  cfg.T = T;
  cfg.kernel_m = 21;
  cfg.snapshot_times.clear();
  return cfg;
}

}  // namespace

TEST(Observer, ZeroTracesGiveZeroMeasurements) {
  const DimensionlessParams d = reference_profile();
  const auto y = uniform_y_grid(181, d.L);
  std::vector<PhysicalModalState> modes(4, PhysicalModalState::zeros(Grid1D{21}));
  const auto m = extract_measurements(edge_traces(modes, y, d.L), d, 3);
  ASSERT_EQ(m.size(), 4u);
  for (const auto& v : m) {
    EXPECT_TRUE(v.Z0.isZero(0.0));
    EXPECT_TRUE(v.X.isZero(0.0));
  }
}

TEST(Observer, UnitSlopeInModeOne) {
  const DimensionlessParams d = reference_profile();
  EdgeTraces t;
  t.y = uniform_y_grid(181, d.L);
  const auto ny = static_cast<Eigen::Index>(t.y.size());
  for (auto* v : {&t.w, &t.alpha, &t.beta, &t.w_x, &t.alpha_x, &t.beta_x, &t.w_t, &t.alpha_t,
                  &t.beta_t}) {
    *v = Eigen::VectorXd::Zero(ny);
  }
  for (Eigen::Index b = 0; b < ny; ++b) t.w_x(b) = std::sin(M_PI * t.y[static_cast<std::size_t>(b)] / d.L);
  const auto m = extract_measurements(t, d, 3);
  EXPECT_NEAR(m[1].Z0(0), 1.0, 1e-12);
  EXPECT_NEAR(m[2].Z0(0), 0.0, 1e-12);
  EXPECT_NEAR(m[1].Z0(1), 0.0, 1e-12);

  t.w_x.setZero();
  for (Eigen::Index b = 0; b < ny; ++b) t.w_t(b) = std::sin(M_PI * t.y[static_cast<std::size_t>(b)] / d.L);
  EXPECT_NEAR(extract_measurements(t, d, 3)[1].Z0(0), std::sqrt(3.0), 1e-12);
}

TEST(Observer, MeasurementsMatchPerModeCharacteristics) {
  const DimensionlessParams d = reference_profile();
  const Grid1D g{21};
  std::mt19937_64 rng(21);
  std::vector<PhysicalModalState> modes;
  for (int n = 0; n <= 3; ++n) {
    PhysicalModalState s = random_smooth_state(g, rng, false);
    if (n == 0) {  // sine fields carry no n = 0 term
      for (auto* v : {&s.w, &s.alpha, &s.w_x, &s.alpha_x, &s.w_t, &s.alpha_t}) v->setZero();
    }
    modes.push_back(s);
  }
  const auto y = uniform_y_grid(181, d.L);
  const auto m = extract_measurements(edge_traces(modes, y, d.L), d, 3);
  for (int n = 0; n <= 3; ++n) {
    const HyperbolicModalState h = to_hyperbolic(modes[static_cast<std::size_t>(n)], d);
    EXPECT_LE((m[static_cast<std::size_t>(n)].Z0 - h.Z.col(0)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((m[static_cast<std::size_t>(n)].X - h.X).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Observer, ExactInitializationStaysExact) {
  RunConfig cfg = short_output_run(1.0);
  cfg.observer_field_amplitude = cfg.field_amplitude;
  cfg.observer_x0 = cfg.x0;
  for (int n = 0; n <= 1; ++n) {
    const ModeSeries s = run_mode(cfg, prepare_mode(cfg, n));
    double worst = 0.0;
    for (const ErrorNorms& e : s.errors) worst = std::max({worst, e.sigma, e.psi, e.X});
    EXPECT_LE(worst, 1e-10) << "n = " << n;
  }
}

TEST(Observer, ClampedErrorDecaysWithLx) {
  const RunConfig cfg = short_output_run(1.0);
  const ModeSetup setup = prepare_mode(cfg, 1);
  const ModeSeries s = run_mode(cfg, setup);
  const Vec3 e0 = s.errors.front().X_abs;
  const Vec3 lx = setup.observer->Lx.diagonal();
  for (std::size_t k = 0; k < s.errors.size(); k += 100) {
    const double t = static_cast<double>(k) * cfg.dt;
    for (int i = 0; i < 3; ++i) {
      const double expect = std::exp(-lx(i) * t) * e0(i);
      EXPECT_LE(std::abs(s.errors[k].X_abs(i) - expect), 1e-4 * e0(i)) << "t = " << t;
    }
  }
}

TEST(Observer, ZeroStateZeroEstimateZeroNorms) {
  RunConfig cfg = short_output_run(0.05);
  cfg.field_amplitude = 0.0;
  cfg.x0 = Vec3::Zero();
  const ModeSeries s = run_mode(cfg, prepare_mode(cfg, 1));
  for (const ErrorNorms& e : s.errors) {
    EXPECT_EQ(e.sigma, 0.0);
    EXPECT_EQ(e.psi, 0.0);
    EXPECT_EQ(e.X, 0.0);
    EXPECT_EQ(e.Omega_nf, 0.0);
  }
  for (const Vec3& u : s.U_in) EXPECT_TRUE(u.isZero(0.0));
}
