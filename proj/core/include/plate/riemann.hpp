#pragma once

#include <Eigen/Core>

#include "plate/params.hpp"
#include "plate/types.hpp"

namespace plate {

/// One Fourier mode of the plate in the original variables.
struct PhysicalModalState {
  Grid1D grid;
  Eigen::VectorXd w, alpha, beta;
  Eigen::VectorXd w_t, alpha_t, beta_t;
  Eigen::VectorXd w_x, alpha_x, beta_x;
  double t = 0.0;

  static PhysicalModalState zeros(const Grid1D& g, double t = 0.0);
};

/// Characteristic variables Z = (p, r, u), Y = (q, s, v) and the clamped-edge
/// values X = (w(0), alpha(0), beta(0)).
struct HyperbolicModalState {
  Grid1D grid;
  Field3 Z, Y;
  Vec3 X = Vec3::Zero();
  double t = 0.0;

  static HyperbolicModalState zeros(const Grid1D& g, double t = 0.0);
};

HyperbolicModalState to_hyperbolic(const PhysicalModalState& s, const DimensionlessParams& d);
PhysicalModalState to_physical(const HyperbolicModalState& h, const DimensionlessParams& d);

/// exp(sqrt(eps) c1bar x) and exp(sqrt(eps) c2bar x).
double riemann_weight1(const DimensionlessParams& d, double x);
double riemann_weight2(const DimensionlessParams& d, double x);

}  // namespace plate
