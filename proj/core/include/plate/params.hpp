#pragma once

#include <optional>

#include "plate/types.hpp"

namespace plate {

/// Plate and free-stream parameters in SI units.
struct PhysicalParams {
  double L1 = 1.0;        // plate width [m]
  double L2 = 9.0;        // plate length [m]
  double h = 0.03;        // thickness [m]
  double rho = 2700.0;    // density [kg/m^3]
  double E = 1.8e8;       // Young's modulus [Pa]
  double G = 1080.0;      // shear modulus [Pa]
  double kprime = 0.833;  // shear factor
  double I = 2.25e-6;     // cross-section moment [m^3]
  double I1 = 0.27;       // bending moment, x direction [m^3]
  double I2 = 0.03;       // bending moment, y direction [m^3]
  double mach = 3.0;
  double rho_f = 0.00453;  // free-stream density [kg/m^3]
  double U = 1020.0;       // free-stream velocity [m/s]

  /// Throws ConfigError unless every field is positive (U may be zero) and
  /// k' lies in (0, 1].
  void validate() const;
};

/// Direct replacements for the derived model constants.
struct ParamOverrides {
  std::optional<double> eps, mu1, mu2, a, theta, xi, L;

  bool any() const { return eps || mu1 || mu2 || a || theta || xi || L; }
};

/// Scaled parameters plus the constants that enter the per-mode model.
struct DimensionlessParams {
  double L = 9.0, h = 0.03, G = 0.0, rho = 0.0, I = 0.0, I1 = 0.0, I2 = 0.0;
  double rho_f = 0.0, U = 0.0, mach = 0.0, kprime = 0.0;
  double eps = 0.0, mu1 = 0.0, mu2 = 0.0, a = 0.0, theta = 0.0, xi = 0.0;
  double c1bar = 0.0, c2bar = 0.0;

  /// k' G h, the factor between the shear force input and the slope input.
  double shear_stiffness() const { return kprime * G * h; }
  /// Transport speeds (1/sqrt(eps), 1/sqrt(mu1), 1/sqrt(mu2)).
  Vec3 speeds() const;
  /// Throws UnsupportedRegime when the speeds are not strictly increasing and
  /// ConfigError for nonpositive eps, mu1, mu2 or a.
  void validate() const;
};

DimensionlessParams nondimensionalize(const PhysicalParams& p,
                                      const ParamOverrides& overrides = {});

/// The reference profile: Table-2 plate with eps = 3, mu1 = 1.8, mu2 = 0.2,
/// a = 0.2, theta = 0.057, xi = 0.2, L = 9.
DimensionlessParams reference_profile();

/// How the (3,2) entry of Phi(0) is set.
enum class Phi32Mode {
  kScaled,   // -n pi / L, makes Sigma Phi(0) + A diagonal
  kLiteral,  // -n pi
};

/// Per-mode coefficients of the transport system
///   Z_t =  Sigma Z_x + F11 (Z+Y) + F12 (Z-Y) + F13 X + int F14 Z + int F15 Y
///   Y_t = -Sigma Y_x + F21 (Z+Y) + F22 (Z-Y) + F23 X + int F24 Z + int F25 Y
///   X'  = A X + Sigma Z(0),  Z(1) = U_in,  Y(0) = C Z(0) + D X.
class ModalCoefficients {
 public:
  ModalCoefficients(const DimensionlessParams& d, int n);

  /// Same speeds as mode n but with every F block, A and D set to zero.
  static ModalCoefficients uncoupled(const DimensionlessParams& d, int n);
  bool coupled() const { return coupled_; }

  int mode() const { return n_; }
  /// n pi / L.
  double wavenumber() const { return k_; }
  const DimensionlessParams& params() const { return d_; }

  const Mat3& Sigma() const { return sigma_; }
  const Mat3& SigmaInv() const { return sigma_inv_; }
  double lambda(int i) const { return sigma_(i, i); }
  const Mat3& A() const { return A_; }
  const Mat3& C() const { return C_; }
  const Mat3& D() const { return D_; }

  double c1(double x) const;
  double c2(double x) const;
  double c3(double x) const;
  double c4(double x) const;
  double c5(double x) const;
  double c6(double x) const;
  double f11(double x, double y) const;
  double f12(double x, double y) const;
  double f21(double x, double y) const;
  double f22(double x, double y) const;

  Mat3 F11(double x) const;
  Mat3 F12(double x) const;
  Mat3 F13(double x) const;
  Mat3 F21(double x) const;
  Mat3 F22(double x) const;
  Mat3 F23(double x) const;
  Mat3 F14(double x, double y) const;
  Mat3 F15(double x, double y) const;
  Mat3 F24(double x, double y) const;
  Mat3 F25(double x, double y) const;

  /// Prescribed initial value of the boundary-gain kernel.
  Mat3 Phi0(const Vec3& delta, Phi32Mode mode = Phi32Mode::kScaled) const;

 private:
  DimensionlessParams d_;
  int n_;
  bool coupled_ = true;
  double k_;
  double se_, sm1_, sm2_;  // sqrt(eps), sqrt(mu1), sqrt(mu2)
  Mat3 sigma_, sigma_inv_, A_, C_, D_;
};

inline ModalCoefficients assemble_coefficients(const DimensionlessParams& d, int n) {
  return ModalCoefficients(d, n);
}

}  // namespace plate
