#pragma once

#include <array>
#include <string>
#include <vector>

#include "plate/params.hpp"
#include "plate/triangle.hpp"

namespace plate {

struct KernelOptions {
  int m = 41;
  double tol = 1e-10;
  int max_iter = 300;
};

/// Bound check max|H| <= phi_bar * exp(M) from the successive-approximation
/// constants.
struct BoundCertificate {
  double m_bar = 0.0;
  double phi_bar = 0.0;  // max of the first iterate
  double M = 0.0;
  double max_abs = 0.0;  // max over the converged kernels
  bool holds = false;
};

/// Controller kernels of one mode on the triangle grid.
struct ControllerKernels {
  int n = 0;
  TriangleGrid grid;
  Vec3 lambda = Vec3::Ones();
  Vec3 delta = Vec3::Constant(5.0);
  Phi32Mode phi32 = Phi32Mode::kScaled;
  MatField K, L;
  std::vector<Mat3> Phi, Omega;  // one per x node
  std::array<std::vector<double>, 3> increments;
  int iterations = 0;
  BoundCertificate certificate;

  /// Line across which k_ij (i > j) jumps: y = (lambda_j / lambda_i) x.
  JumpLine jump_line(int i, int j) const;
  /// Pointwise values; the lower entries of K are taken from the side of
  /// their jump line that contains (x, y).
  Mat3 K_at(double x, double y) const;
  Mat3 L_at(double x, double y) const;
  Mat3 Phi_at(double x) const { return interp_uniform(Phi, x); }
  Mat3 Omega_at(double x) const { return interp_uniform(Omega, x); }
  /// Values of K(1, y) and L(1, y) with the jump of each entry kept sharp.
  Mat3 K_edge(double y) const;
  Mat3 L_edge(double y) const;
};

ControllerKernels solve_controller_kernels(const ModalCoefficients& c, const Vec3& delta,
                                           const KernelOptions& opt = {},
                                           Phi32Mode phi32 = Phi32Mode::kScaled);

/// Same solve with Phi(0) given explicitly.
ControllerKernels solve_controller_kernels(const ModalCoefficients& c, const Vec3& delta,
                                           const Mat3& phi0, const KernelOptions& opt);

/// Which x = 1 relation Z(1) = U + R Y(1) the observer uses.
Mat3 observer_reflection(const DimensionlessParams& d, bool literal);

/// Observer kernels of one mode.
struct ObserverKernels {
  int n = 0;
  TriangleGrid grid;
  Vec3 lambda = Vec3::Ones();
  Mat3 R = -Mat3::Identity();
  MatField N, M, Dminus, Dplus;
  std::vector<Mat3> Pplus, Pminus;  // M(x,0) Sigma and N(x,0) Sigma at the x nodes
  std::vector<Mat3> Omega;          // strictly lower triangular, at the x nodes
  Mat3 Lx = Mat3::Zero();
  std::array<std::vector<double>, 3> increments;  // per column (3, 2, 1 order)
  int iterations = 0;
  BoundCertificate certificate;

  /// Line across which n_ij (i < j) jumps: through (1, 1) with slope
  /// lambda_j / lambda_i.
  JumpLine jump_line(int i, int j) const;
  Mat3 N_at(double x, double y) const;
  Mat3 M_at(double x, double y) const;
  Mat3 Pplus_at(double x) const { return interp_uniform(Pplus, x); }
  /// N(x, 0) Sigma with the jumps of the upper entries kept sharp.
  Mat3 Pminus_at(double x) const;
};

/// Solves in reflected coordinates (x', y') = (1 - y, 1 - x), where the
/// system takes the controller form, and maps back.
ObserverKernels solve_observer_kernels(const ModalCoefficients& c, const Vec3& gains,
                                       const Mat3& R, const KernelOptions& opt = {});

/// Independent solve in the original coordinates (successive approximations
/// on all columns at once). Used to cross-check the reflected solve.
ObserverKernels solve_observer_kernels_direct(const ModalCoefficients& c, const Vec3& gains,
                                              const Mat3& R, const KernelOptions& opt = {});

/// Max-norm residuals of one kernel block.
struct BlockResidual {
  std::string block;
  double pde = 0.0;       // max over checked nodes
  double boundary = 0.0;  // max boundary-condition violation
  int checked = 0;
  int skipped = 0;  // nodes whose difference stencil would cross a jump line
};

struct ResidualReport {
  std::vector<BlockResidual> blocks;
  double max_pde() const;
  double max_boundary() const;
};

ResidualReport kernel_residual(const ControllerKernels& k, const ModalCoefficients& c);
ResidualReport kernel_residual(const ObserverKernels& k, const ModalCoefficients& c);

}  // namespace plate
