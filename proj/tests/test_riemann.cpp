#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "plate/checks.hpp"
#include "plate/errors.hpp"
#include "plate/riemann.hpp"

using namespace plate;

TEST(Riemann, ZeroStateMapsToZero) {
  const Grid1D g{21};
  const HyperbolicModalState h = to_hyperbolic(PhysicalModalState::zeros(g), reference_profile());
  EXPECT_TRUE(h.Z.isZero(0.0));
  EXPECT_TRUE(h.Y.isZero(0.0));
  EXPECT_TRUE(h.X.isZero(0.0));
}

TEST(Riemann, StaticStateWithoutFlowIsSymmetric) {
  const Grid1D g{21};
  PhysicalModalState s = PhysicalModalState::zeros(g);
  for (std::size_t i = 0; i < g.n; ++i) s.w_x(static_cast<Eigen::Index>(i)) = std::cos(3.0 * g.at(i));
  const HyperbolicModalState h = to_hyperbolic(s, test::zero_flow_profile());
  EXPECT_TRUE(h.Z.row(0).isApprox(s.w_x.transpose()));
  EXPECT_TRUE(h.Y.row(0).isApprox(s.w_x.transpose()));
}

TEST(Riemann, WeightedVariablesMatchClosedForm) {
  const DimensionlessParams d = reference_profile();
  const double se = std::sqrt(3.0);
  const double c1 = 0.2 / (2.0 * se) + 0.057 / 6.0;
  const double c2 = 0.2 / (2.0 * se) - 0.057 / 6.0;
  const Grid1D g{11};
  PhysicalModalState s = PhysicalModalState::zeros(g);
  s.w_x.setConstant(0.3);
  s.w_t.setConstant(-0.2);
  s.beta_x.setConstant(1.0);
  s.beta_t.setConstant(0.5);
  const HyperbolicModalState h = to_hyperbolic(s, d);
  for (std::size_t i = 0; i < g.n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double x = g.at(i);
    EXPECT_NEAR(h.Z(0, k), std::exp(se * c1 * x) * (0.3 - se * 0.2), 1e-14);
    EXPECT_NEAR(h.Y(0, k), std::exp(se * c2 * x) * (0.3 + se * 0.2), 1e-14);
    EXPECT_NEAR(h.Z(2, k), 1.0 + std::sqrt(0.2) * 0.5, 1e-14);
    EXPECT_NEAR(h.Y(2, k), 1.0 - std::sqrt(0.2) * 0.5, 1e-14);
  }
}

TEST(Riemann, ClampedValuesOnly) {
  const Grid1D g{21};
  HyperbolicModalState h = HyperbolicModalState::zeros(g);
  h.X = Vec3(0.01, 0.02, 0.01);
  const PhysicalModalState s = to_physical(h, reference_profile());
  EXPECT_TRUE((s.w.array() == 0.01).all());
  EXPECT_TRUE((s.alpha.array() == 0.02).all());
  EXPECT_TRUE((s.beta.array() == 0.01).all());
  EXPECT_TRUE(s.w_x.isZero(0.0));
  EXPECT_TRUE(s.w_t.isZero(0.0));
  EXPECT_TRUE(s.beta_t.isZero(0.0));
}

TEST(Riemann, ConstantPairWithoutFlow) {
  const Grid1D g{21};
  HyperbolicModalState h = HyperbolicModalState::zeros(g);
  h.Z.row(0).setConstant(0.4);
  h.Y.row(0).setConstant(0.4);
  h.X(0) = -0.1;
  const PhysicalModalState s = to_physical(h, test::zero_flow_profile());
  for (std::size_t i = 0; i < g.n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(s.w_x(k), 0.4, 1e-15);
    EXPECT_NEAR(s.w(k), 0.4 * g.at(i) - 0.1, 1e-14);
    EXPECT_NEAR(s.w_t(k), 0.0, 1e-15);
  }
}

TEST(Riemann, RoundTrip) {
  const DimensionlessParams d = reference_profile();
  EXPECT_LE(riemann_roundtrip_error(d, Grid1D{21}, 20, 1), 1e-10);
  EXPECT_LE(riemann_roundtrip_error(d, Grid1D{81}, 20, 2), 1e-10);
}

TEST(Riemann, PhysicalRoundTripOnDerivativeFields) {
  const DimensionlessParams d = reference_profile();
  const Grid1D g{41};
  std::mt19937_64 rng(9);
  const PhysicalModalState s = random_smooth_state(g, rng, false);
  const PhysicalModalState back = to_physical(to_hyperbolic(s, d), d);
  EXPECT_LE((back.w_x - s.w_x).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((back.alpha_t - s.alpha_t).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((back.beta_x - s.beta_x).cwiseAbs().maxCoeff(), 1e-13);
  // w is rebuilt from w_x by the trapezoid rule: O(dx^2) against the exact field.
  EXPECT_LE((back.w - s.w).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(Riemann, GridMismatchIsShapeError) {
  PhysicalModalState s = PhysicalModalState::zeros(Grid1D{21});
  s.w_t.resize(5);
  EXPECT_THROW(to_hyperbolic(s, reference_profile()), ShapeError);
  HyperbolicModalState h = HyperbolicModalState::zeros(Grid1D{21});
  h.Y.resize(3, 4);
  EXPECT_THROW(to_physical(h, reference_profile()), ShapeError);
}
