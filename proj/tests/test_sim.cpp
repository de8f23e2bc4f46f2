#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <limits>
#include <numbers>

#include "plate/diagnostics.hpp"
#include "plate/errors.hpp"
#include "plate/modal.hpp"
#include "plate/plant.hpp"
#include "plate/scenario.hpp"

using namespace plate;

namespace {

constexpr double kDt = 0.001;

std::shared_ptr<const CharacteristicLattices> lattices(const ModalCoefficients& c) {
  return std::make_shared<const CharacteristicLattices>(c.Sigma().diagonal(), kDt);
}

KernelOptions grid(int m) {
  KernelOptions o;
  o.m = m;
  return o;
}

}  // namespace

TEST(Plant, ZeroStateIsAnEquilibrium) {
  const ModalCoefficients c(reference_profile(), 2);
  const auto lat = lattices(c);
  const ModalTransport m(c, lat);
  const InflowClosure free_end = free_end_closure(m);
  LatticeState s = LatticeState::zeros(*lat);
  for (int k = 0; k < 200; ++k) s = plant_step(m, s, free_end);
  for (const auto& f : s.f) EXPECT_TRUE(f.isZero(0.0));
  EXPECT_TRUE(s.X.isZero(0.0));
}

TEST(Plant, UncoupledConstantInflowFillsTheDomain) {
  const ModalCoefficients c = ModalCoefficients::uncoupled(reference_profile(), 1);
  const auto lat = lattices(c);
  const ModalTransport m(c, lat);
  const Vec3 e(0.3, -0.2, 0.5);
  const InflowClosure constant = [e](const LatticeState&) { return e; };
  LatticeState s = LatticeState::zeros(*lat);
  const auto steps = static_cast<int>(std::ceil(std::sqrt(3.0) / kDt)) + 1;
  for (int k = 0; k < steps; ++k) s = plant_step(m, s, constant);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE((s.f[i].array() - e(i)).abs().maxCoeff(), 1e-12) << "component " << i;
  }
  // X' = Sigma Z(0) once the front has reached x = 0.
  EXPECT_GT(s.X(0), 0.0);
}

TEST(Plant, CharacteristicFrontArrivesOnTime) {
  const ModalCoefficients c = ModalCoefficients::uncoupled(reference_profile(), 0);
  const auto lat = lattices(c);
  const ModalTransport m(c, lat);
  const InflowClosure unit = [](const LatticeState&) { return Vec3(1.0, 1.0, 1.0); };
  LatticeState s = LatticeState::zeros(*lat);
  // The slowest family needs sqrt(3) to cross; halfway it covers x >= 1/2.
  const auto half = static_cast<int>(std::lround(0.5 * std::sqrt(3.0) / kDt));
  for (int k = 0; k < half; ++k) s = plant_step(m, s, unit);
  EXPECT_NEAR(lat->value_at(0, s.f[0], 0.6), 1.0, 1e-12);
  EXPECT_NEAR(lat->value_at(0, s.f[0], 0.4), 0.0, 1e-12);
}

TEST(Diagnostics, DecayFitRecoversExponent) {
  std::vector<double> t, v;
  for (int k = 0; k <= 600; ++k) {
    t.push_back(0.01 * k);
    v.push_back(4.0 * std::exp(-3.25 * t.back()));
  }
  EXPECT_NEAR(fit_decay_rate(t, v, 0.5, 4.0), 3.25, 1e-10);
  EXPECT_THROW(fit_decay_rate(t, v, 10.0, 11.0), std::invalid_argument);
}

TEST(Diagnostics, PlateNormMatchesTwoDimensionalQuadrature) {
  const double L = 9.0;
  const Grid1D g{21};
  ModalSeries s;
  s.N = 2;
  s.L = L;
  for (auto* m : {&s.w, &s.alpha, &s.beta, &s.w_t, &s.alpha_t, &s.beta_t}) {
    *m = Eigen::MatrixXd::Zero(3, 21);
  }
  std::vector<PhysicalModalState> modes(3, PhysicalModalState::zeros(g));
  for (int n = 0; n <= 2; ++n) {
    for (Eigen::Index i = 0; i < 21; ++i) {
      const double x = g.at(static_cast<std::size_t>(i));
      const double w = n == 0 ? 0.0 : std::sin(M_PI * x) / n;
      const double b = 0.3 + n * x * x;
      s.w(n, i) = w;
      s.beta(n, i) = b;
      s.alpha_t(n, i) = n == 0 ? 0.0 : 0.1 * x;
      auto& mo = modes[static_cast<std::size_t>(n)];
      mo.w(i) = w;
      mo.beta(i) = b;
      mo.alpha_t(i) = s.alpha_t(n, i);
      mo.w_x(i) = n == 0 ? 0.0 : M_PI * std::cos(M_PI * x) / n;
      mo.beta_x(i) = 2.0 * n * x;
    }
  }
  const auto y = uniform_y_grid(181, L);
  const PlateField2D f = reconstruct(s, y);
  const std::vector<double> wx = trapezoid_weights(21, g.step());
  const std::vector<double> wy = trapezoid_weights(y.size(), y[1] - y[0]);
  double total = 0.0;
  for (Eigen::Index i = 0; i < 21; ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      double w_x = 0.0, w_y = 0.0, b_x = 0.0, b_y = 0.0;
      for (int n = 0; n <= 2; ++n) {
        const double k = n * M_PI / L;
        const auto& mo = modes[static_cast<std::size_t>(n)];
        w_x += mo.w_x(i) * std::sin(k * y[j]);
        w_y += mo.w(i) * k * std::cos(k * y[j]);
        b_x += mo.beta_x(i) * std::cos(k * y[j]);
        b_y -= mo.beta(i) * k * std::sin(k * y[j]);
      }
      const double integrand = f.w(i, jj) * f.w(i, jj) + w_x * w_x + w_y * w_y +
                               f.beta(i, jj) * f.beta(i, jj) + b_x * b_x + b_y * b_y +
                               f.alpha_t(i, jj) * f.alpha_t(i, jj);
      total += wx[static_cast<std::size_t>(i)] * wy[j] * integrand;
    }
  }
  EXPECT_NEAR(plate_norm(modes, L), total, 1e-12 * total);
}

TEST(Diagnostics, LyapunovGridQuadratureOfConstants) {
  LyapunovParams p;
  p.zeta1 = 2.0;
  p.zeta2 = 3.0;
  p.delta = 34.0;
  const Mat3 Sinv = Vec3(std::sqrt(3.0), std::sqrt(1.8), std::sqrt(0.2)).asDiagonal();
  const Grid1D g{4001};
  const Vec3 cs(0.1, -0.2, 0.05), cp(1.0, 0.5, -0.25);
  const Field3 sigma = cs.replicate(1, 4001);
  const Field3 psi = cp.replicate(1, 4001);
  const Vec3 X(0.01, 0.02, 0.01);
  const double up = (std::exp(p.delta) - 1.0) / p.delta;
  const double down = (1.0 - std::exp(-p.delta)) / p.delta;
  const double expect = p.zeta1 * X.squaredNorm() + p.zeta2 * up * cs.dot(Sinv * cs) +
                        down * cp.dot(Sinv * cp);
  EXPECT_NEAR(lyapunov_value(p, Sinv, g, sigma, psi, X), expect, 1e-5 * expect);
  EXPECT_EQ(lyapunov_value(p, Sinv, g, Field3::Zero(3, 4001), Field3::Zero(3, 4001), Vec3::Zero()),
            0.0);
}

TEST(Diagnostics, LyapunovLatticeQuadratureOfConstants) {
  const ModalCoefficients c(reference_profile(), 1);
  const auto lat = lattices(c);
  LyapunovParams p;
  p.zeta1 = 79.4;
  p.zeta2 = 3.07e4;
  p.delta = 36.1;
  const Vec3 cs(1e-3, 2e-3, -1e-3), cp(0.4, -0.3, 0.2);
  const LatticeState s = LatticeState::sample(
      *lat, [&](int k, double) { return k < 3 ? 0.0 : cp(k - 3); }, Vec3(0.01, 0.02, 0.01));
  std::array<Eigen::VectorXd, 3> sigma;
  for (int i = 0; i < 3; ++i) sigma[i] = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(lat->size(i)), cs(i));
  const Mat3& Sinv = c.SigmaInv();
  const double up = (std::exp(p.delta) - 1.0) / p.delta;
  const double down = (1.0 - std::exp(-p.delta)) / p.delta;
  const double expect = p.zeta1 * s.X.squaredNorm() + p.zeta2 * up * cs.dot(Sinv * cs) +
                        down * cp.dot(Sinv * cp);
  EXPECT_NEAR(lyapunov_value(p, Sinv, *lat, sigma, s), expect, 1e-4 * expect);
}

TEST(Diagnostics, LyapunovMonitorCountsViolations) {
  LyapunovMonitor exact(9.0, kDt);
  for (int k = 0; k < 100; ++k) exact.push(std::exp(-9.0 * k * kDt));
  EXPECT_EQ(exact.violations(), 0);

  LyapunovMonitor bumped(9.0, kDt);
  for (int k = 0; k < 100; ++k) bumped.push(std::exp(-9.0 * k * kDt) * (k == 50 ? 1.01 : 1.0));
  EXPECT_EQ(bumped.violations(), 1);

  LyapunovMonitor early(9.0, kDt);
  for (int k = 0; k < 100; ++k) early.push(k == 5 ? 2.0 : std::exp(-9.0 * k * kDt));
  EXPECT_EQ(early.violations(), 0);  // warm-up steps are not checked
}

TEST(Diagnostics, LyapunovConstantsFrozen) {
  const DimensionlessParams d = reference_profile();
  const double expect[] = {33.7413, 36.1028, 42.7328, 54.207};
  for (int n = 0; n <= 3; ++n) {
    const ModalCoefficients c(d, n);
    const ControllerKernels k = solve_controller_kernels(c, Vec3::Constant(5.0), grid(41));
    const LyapunovParams p = lyapunov_params(k, c);
    EXPECT_NEAR(p.delta, expect[n], 1e-3) << "n = " << n;
    EXPECT_NEAR(p.cprime, 9.0, 1e-12);
    EXPECT_GT(p.zeta1, 0.0);
    EXPECT_GT(p.zeta2, 0.0);
  }
}

TEST(Diagnostics, TargetTransformOneStep) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c(d, 1);
  const ControllerKernels k = solve_controller_kernels(c, Vec3::Constant(5.0), grid(41));
  const auto lat = lattices(c);
  const ModalTransport m(c, lat);
  const Grid1D g{21};
  const LatticeLaw law(k, *lat, g);
  LatticeState s = LatticeState::sample(
      *lat, [](int, double x) { return 0.01 * std::sin(M_PI * x); }, Vec3(0.01, 0.02, 0.01));
  s.set_Y0(m.inflow_y(s.Z0(), s.X));
  s.set_Z1(law.solve_inflow(s));
  const InflowClosure closure = [&law](const LatticeState& st) { return law.solve_inflow(st); };
  for (int step = 0; step < 50; ++step) s = plant_step(m, s, closure);
  const LatticeState next = plant_step(m, s, closure);
  const TargetCheck r = target_transform_check(k, c, to_grid(*lat, s, g), to_grid(*lat, next, g));
  std::printf("ode %g pde %g end %g\n", r.ode, r.pde, r.sigma_end);
  const Field3 sigma = law.target(*lat, next);
  EXPECT_LE(sigma.col(sigma.cols() - 1).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Scenario, StateFeedbackKeepsSigmaEndAtZero) {
  RunConfig cfg = reference_run_config();
  cfg.T = 0.3;
  cfg.kernel_m = 21;
  cfg.snapshot_times.clear();
  const ModeSeries s = run_mode(cfg, prepare_mode(cfg, 2));
  for (double v : s.sigma_end) EXPECT_LE(v, 1e-8);
  EXPECT_EQ(s.omega_a.size(), 301u);
}

TEST(Scenario, ParallelRunsAreReproducible) {
  RunConfig cfg = reference_run_config();
  cfg.T = 0.1;
  cfg.kernel_m = 21;
  cfg.snapshot_times = {0.0, 0.1};
  cfg.jobs = 1;
  const ScenarioResult a = run_scenario(cfg);
  cfg.jobs = 4;
  const ScenarioResult b = run_scenario(cfg);
  EXPECT_EQ(a.omega_a, b.omega_a);
  ASSERT_EQ(a.snapshots.size(), 2u);
  EXPECT_EQ(a.snapshots[1].field.w, b.snapshots[1].field.w);
}

TEST(Scenario, DivergenceIsReported) {
  RunConfig cfg = reference_run_config();
  cfg.T = 0.05;
  cfg.kernel_m = 21;
  cfg.modes = 0;
  cfg.field_amplitude = std::numeric_limits<double>::infinity();
  EXPECT_THROW(run_scenario(cfg), DivergenceError);
}
