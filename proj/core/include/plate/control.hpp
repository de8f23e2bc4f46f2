#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "plate/kernels.hpp"
#include "plate/riemann.hpp"

namespace plate {

/// First derivative with the summation-by-parts property for the trapezoid
/// norm: central differences inside, one-sided first differences at the ends.
Eigen::VectorXd sbp_derivative(const Eigen::VectorXd& f, double h);

/// Coefficients of the boundary laws written in w, alpha, beta.
/// F[i][j] multiplies (w, w_t, alpha, alpha_t, beta, beta_t)[j] under the
/// integral; D(i, j) multiplies (w(1), w(0), alpha(1), alpha(0), beta(1), beta(0))[j].
struct GainTables {
  int n = 0;
  double wavenumber = 0.0;
  Grid1D grid;
  std::array<std::array<Eigen::VectorXd, 6>, 3> F;
  Eigen::Matrix<double, 3, 6> D = Eigen::Matrix<double, 3, 6>::Zero();
  /// k_ij(1, xi), l_ij(1, xi) and their xi-derivatives at the grid nodes.
  std::array<std::array<Eigen::VectorXd, 3>, 3> k_edge, l_edge, k_xi, l_xi;
  Mat3 phi1 = Mat3::Zero();
};

GainTables build_gain_tables(const ControllerKernels& k, const DimensionlessParams& d, int n,
                             const Grid1D& grid);

/// Shear force and the two moments applied at x = 1 (U1n, U2n, U3n).
Vec3 state_feedback(const GainTables& g, const PhysicalModalState& s,
                    const DimensionlessParams& d);

/// As state_feedback on an estimate, but w(0), alpha(0), beta(0) come from
/// the measured clamped-edge values.
Vec3 output_feedback(const GainTables& g, const PhysicalModalState& estimate,
                     const Vec3& measured_x0, const DimensionlessParams& d);

/// U_in = int K(1,y) Z + int L(1,y) Y + Phi(1) X by the trapezoid rule on the
/// state grid.
Vec3 hyperbolic_law(const ControllerKernels& k, const HyperbolicModalState& h);

/// Physical inputs that realize Z(1) = U_in, given the x = 1 samples of `s`.
Vec3 physical_inputs(const Vec3& U_in, const PhysicalModalState& s, const DimensionlessParams& d,
                     int n);

struct BoundaryTraces {
  Eigen::VectorXd U1, U2, U3;
};

/// Sine sums for U1, U2 and a cosine sum for U3 over modes 0..N.
BoundaryTraces sum_modal_inputs(const std::vector<Vec3>& per_mode, const std::vector<double>& y,
                                double L);

}  // namespace plate
