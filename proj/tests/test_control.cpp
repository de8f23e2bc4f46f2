#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plate/checks.hpp"
#include "plate/control.hpp"
#include "plate/modal.hpp"

using namespace plate;

namespace {

const Vec3 kFive = Vec3::Constant(5.0);

KernelOptions grid(int m) {
  KernelOptions o;
  o.m = m;
  return o;
}

}  // namespace

TEST(Control, ZeroKernelsLeaveOnlyTheExplicitMomentTerm) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c = ModalCoefficients::uncoupled(d, 2);
  const ControllerKernels k = solve_controller_kernels(c, kFive, Mat3::Zero(), grid(21));
  const GainTables g = build_gain_tables(k, d, 2, Grid1D{21});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 6; ++j) EXPECT_TRUE(g.F[i][j].isZero(0.0));
  }
  Eigen::Matrix<double, 3, 6> D = Eigen::Matrix<double, 3, 6>::Zero();
  D(2, 2) = 2.0 * M_PI / 9.0;
  EXPECT_TRUE(g.D.isApprox(D, 1e-15));
}

TEST(Control, ZeroStateGivesZeroInputs) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c(d, 1);
  const ControllerKernels k = solve_controller_kernels(c, kFive, grid(21));
  const GainTables g = build_gain_tables(k, d, 1, Grid1D{21});
  const PhysicalModalState z = PhysicalModalState::zeros(Grid1D{21});
  EXPECT_TRUE(state_feedback(g, z, d).isZero(0.0));
  EXPECT_TRUE(output_feedback(g, z, Vec3::Zero(), d).isZero(0.0));
  EXPECT_TRUE(hyperbolic_law(k, to_hyperbolic(z, d)).isZero(0.0));
}

TEST(Control, TipRotationOnly) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c(d, 1);
  const ControllerKernels k = solve_controller_kernels(c, kFive, grid(21));
  const Grid1D gr{21};
  const GainTables g = build_gain_tables(k, d, 1, gr);
  PhysicalModalState s = PhysicalModalState::zeros(gr);
  s.alpha(20) = 1.0;
  const Vec3 u = state_feedback(g, s, d);
  // The end node also enters the trapezoid sum with weight h / 2.
  const double h = gr.step();
  Vec3 law;
  for (int i = 0; i < 3; ++i) law(i) = g.D(i, 2) - 0.5 * h * g.F[i][2](20);
  const double kGh = d.kprime * d.G * d.h;
  EXPECT_NEAR(u(0), kGh * (law(0) * std::exp(-std::sqrt(d.eps) * d.c1bar) - 1.0), 1e-12);
  EXPECT_NEAR(u(1), law(1), 1e-12);
  EXPECT_NEAR(u(2), law(2), 1e-12);
}

TEST(Control, VelocityGainStructure) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c(d, 2);
  const ControllerKernels k = solve_controller_kernels(c, kFive, grid(21));
  const Grid1D gr{41};
  const GainTables g = build_gain_tables(k, d, 2, gr);
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> pick(0, 40);
  const double se = std::sqrt(d.eps);
  for (int t = 0; t < 5; ++t) {
    const int a = pick(rng);
    const double xi = gr.at(static_cast<std::size_t>(a));
    const Mat3 K = k.K_edge(xi), L = k.L_edge(xi);
    for (int i = 0; i < 3; ++i) {
      const double expect = se * (std::exp(se * d.c1bar * xi) * K(i, 0) -
                                  std::exp(se * d.c2bar * xi) * L(i, 0));
      EXPECT_NEAR(g.F[i][1](a), expect, 1e-12);
      EXPECT_NEAR(g.F[i][5](a), std::sqrt(d.mu2) * (K(i, 2) - L(i, 2)), 1e-12);
    }
  }
}

TEST(Control, SbpDerivativeProperties) {
  const int n = 41;
  const double h = 1.0 / (n - 1);
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) {
    f(i) = std::sin(2.0 * i * h);
  }
  // Second order at interior nodes.
  const Eigen::VectorXd df = sbp_derivative(f, h);
  double err = 0.0;
  for (int i = 1; i + 1 < n; ++i) err = std::max(err, std::abs(df(i) - 2.0 * std::cos(2.0 * i * h)));
  const int n2 = 81;
  const double h2 = 1.0 / (n2 - 1);
  Eigen::VectorXd f2(n2);
  for (int i = 0; i < n2; ++i) f2(i) = std::sin(2.0 * i * h2);
  const Eigen::VectorXd df2 = sbp_derivative(f2, h2);
  double err2 = 0.0;
  for (int i = 1; i + 1 < n2; ++i) {
    err2 = std::max(err2, std::abs(df2(i) - 2.0 * std::cos(2.0 * i * h2)));
  }
  EXPECT_NEAR(err / err2, 4.0, 0.4);
  EXPECT_TRUE(sbp_derivative(Eigen::VectorXd::Constant(9, 3.0), 0.125).isZero(1e-14));
}

TEST(Control, DualFormulationAgrees) {
  const DimensionlessParams d = reference_profile();
  for (int n = 0; n <= 3; ++n) {
    const ModalCoefficients c(d, n);
    const ControllerKernels k = solve_controller_kernels(c, kFive, grid(41));
    EXPECT_LE(dual_gain_deviation(k, d, n, Grid1D{21}, 20, 7 + n, true), 1e-6) << "n = " << n;
  }
}

TEST(Control, DualFormulationWithExactSlopesIsSecondOrder) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c(d, 1);
  const ControllerKernels k = solve_controller_kernels(c, kFive, grid(41));
  const double coarse = dual_gain_deviation(k, d, 1, Grid1D{21}, 10, 3, false);
  const double fine = dual_gain_deviation(k, d, 1, Grid1D{41}, 10, 3, false);
  EXPECT_GT(coarse / fine, 3.0);
}

TEST(Control, OutputFeedbackOnExactEstimate) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c(d, 3);
  const ControllerKernels k = solve_controller_kernels(c, kFive, grid(21));
  const Grid1D gr{21};
  const GainTables g = build_gain_tables(k, d, 3, gr);
  std::mt19937_64 rng(1);
  const PhysicalModalState s = random_smooth_state(gr, rng, true);
  const Vec3 x0(s.w(0), s.alpha(0), s.beta(0));
  EXPECT_EQ(output_feedback(g, s, x0, d), state_feedback(g, s, d));
}

TEST(Control, ModalSumOfInputs) {
  const double L = 9.0;
  const auto y = uniform_y_grid(91, L);
  const BoundaryTraces zero = sum_modal_inputs({Vec3::Zero(), Vec3::Zero()}, y, L);
  EXPECT_TRUE(zero.U1.isZero(0.0));
  EXPECT_TRUE(zero.U3.isZero(0.0));

  std::vector<Vec3> one(3, Vec3::Zero());
  one[2] = Vec3(1.5, -0.5, 2.0);
  const BoundaryTraces t = sum_modal_inputs(one, y, L);
  for (std::size_t b = 0; b < y.size(); ++b) {
    const auto i = static_cast<Eigen::Index>(b);
    EXPECT_NEAR(t.U1(i), 1.5 * std::sin(2.0 * M_PI * y[b] / L), 1e-14);
    EXPECT_NEAR(t.U3(i), 2.0 * std::cos(2.0 * M_PI * y[b] / L), 1e-14);
  }

  std::vector<Vec3> modes = {Vec3(0.0, 0.0, 0.3), Vec3(1.0, 2.0, 3.0), Vec3(-1.0, 0.5, 0.25),
                             Vec3(0.1, -0.2, 0.7)};
  const BoundaryTraces s = sum_modal_inputs(modes, y, L);
  const std::vector<double> u1(s.U1.data(), s.U1.data() + s.U1.size());
  const std::vector<double> u3(s.U3.data(), s.U3.data() + s.U3.size());
  const auto p1 = project(u1, Basis::kSine, 3, L);
  const auto p3 = project(u3, Basis::kCosine, 3, L);
  for (int n = 0; n <= 3; ++n) {
    if (n > 0) EXPECT_NEAR(p1[n], modes[n](0), 1e-12);
    EXPECT_NEAR(p3[n], modes[n](2), 1e-12);
  }
}
