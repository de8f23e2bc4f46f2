#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "plate/kernels.hpp"
#include "plate/triangle.hpp"
#include "plate/types.hpp"

namespace plate::detail {

/// Linear Goursat system on the triangle 0 <= y <= x <= 1:
///   Sigma K_x + K_y Sigma = K A1(y) + L B1(y) - Omega(x) K + G1
///                           + int_y^x [K(x,s) E1(s,y) + L(x,s) H1(s,y)] ds
///   Sigma L_x - L_y Sigma = K A2(y) + L B2(y) - Omega(x) L + G2
///                           + int_y^x [K(x,s) E2(s,y) + L(x,s) H2(s,y)] ds
/// with Sigma L + L Sigma = -A2 and (Sigma K - K Sigma)_ij = -A1_ij (i > j)
/// on y = x, K(x,0) = L(x,0) Rb + Phi(x), and Omega strictly upper
/// triangular with omega_ij = (lambda_i - lambda_j) k_ij(x,x) + A1_ij.
/// Phi (optional) solves
///   Phi' = Sigma^-1 [Phi A - F13 - Omega Phi + L(x,0) Sigma D
///                    + int_0^x (K F13(y) + L F23(y)) dy],  Phi(0) = Phi0.
struct GoursatSystem {
  Vec3 lambda = Vec3::Ones();
  TriangleGrid grid;

  std::function<Mat3(double)> A1, B1, A2, B2;
  std::function<Mat3(double, double)> G1, G2, E1, H1, E2, H2;
  Mat3 Rb = -Mat3::Identity();

  bool has_phi = false;
  Mat3 phi0 = Mat3::Zero();
  Mat3 A = Mat3::Zero();
  Mat3 D = Mat3::Zero();
  std::function<Mat3(double)> F13, F23;

  double tol = 1e-10;
  int max_iter = 300;
};

struct GoursatSolution {
  MatField K, L;
  std::vector<Mat3> Phi, Omega;  // at the x nodes
  std::array<std::vector<double>, 3> increments;  // per row, one entry per sweep
  double first_iterate_max = 0.0;
  int iterations = 0;
};

/// Row sweep (rows 3, 2, 1) of successive approximations starting from zero.
/// Throws DivergenceError when a row does not reach `tol`.
GoursatSolution solve_goursat(const GoursatSystem& sys);

/// Memo of cut-cell stencils. Quadrature paths repeat on every sweep, so the
/// least-squares fits are computed once per solve.
class StencilCache {
 public:
  const NodeStencil& get(const TriangleGrid& g, double x, double y,
                         const std::vector<JumpLine>& lines, double rx, double ry);

 private:
  struct Key {
    double x, y;
    const JumpLine* lines;
    std::uint32_t mask;
    bool operator==(const Key&) const = default;
  };
  struct Hash {
    std::size_t operator()(const Key& k) const;
  };
  std::unordered_map<Key, NodeStencil, Hash> map_;
};

/// Trapezoid quadrature of a tabulated field from (qx, qy) along the
/// direction (dirx, diry) over parameter length tau, samples about one cell
/// apart, each interpolated from the side of `lines` it lies on.
double integrate_along(const TriangleGrid& g, const std::vector<double>& rhs,
                       const std::vector<JumpLine>& lines, double qx, double qy, double dirx,
                       double diry, double tau, StencilCache* cache = nullptr);

/// Jump line of the lower entry k_ij (i > j): the characteristic through the
/// origin, y = (lambda_j / lambda_i) x.
JumpLine canonical_ray(const Vec3& lambda, int i, int j);

/// Lines across which the right-hand side of k_ij (or l_ij) may jump.
std::vector<JumpLine> rhs_lines(const Vec3& lambda, int i, int j, bool k_equation);

/// Growth constant m_bar of the successive-approximation bound; S_bar bounds
/// the already-solved rows.
double certificate_m_bar(const ModalCoefficients& c, double S_bar);
plate::BoundCertificate make_certificate(const ModalCoefficients& c, double phi_bar, double max_abs);

}  // namespace plate::detail
