#pragma once

#include <array>
#include <vector>

#include "plate/kernels.hpp"
#include "plate/plant.hpp"
#include "plate/riemann.hpp"

namespace plate {

/// H1 norms of w, alpha, beta plus L2 norms of their rates, squared (one mode).
double modal_norm(const PhysicalModalState& s);

/// Contribution of mode n to plate_norm.
double plate_norm_term(const PhysicalModalState& s, int n, double L);

/// Squared 2-D norm of the plate on (0,1) x (0,L) from its modes via
/// Parseval: weight L/2 for sine and cosine terms with n >= 1, L for the
/// n = 0 cosine term, and the y-derivative adds (n pi / L)^2 to the H1 part.
double plate_norm(const std::vector<PhysicalModalState>& modes, double L);

/// Least-squares slope of -log(v) against t over [t0, t1].
double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v, double t0,
                      double t1);

/// sigma = Z - int K Z - int L Y - Phi X by the trapezoid rule on the state grid.
Field3 target_state(const ControllerKernels& k, const HyperbolicModalState& h);

struct TargetCheck {
  double sigma_end = 0.0;  // max |sigma(t, 1)|
  double pde = 0.0;        // max |sigma_t - Sigma sigma_x - Omega sigma| at interior nodes
  double ode = 0.0;        // |X' - E1 X - Sigma sigma(0)|
};

/// Residuals of the target system between two states dt apart.
TargetCheck target_transform_check(const ControllerKernels& k, const ModalCoefficients& c,
                                   const HyperbolicModalState& before,
                                   const HyperbolicModalState& after);

/// Weights of the Lyapunov functional and the constants behind them.
struct LyapunovParams {
  double zeta1 = 0.0, zeta2 = 0.0, delta = 0.0, cprime = 0.0;
  std::array<double, 6> M{};
};

/// Constants from the kernels: E2 = C Phi(0) + D, the coupling F21 +- F22
/// and the kernels of the psi equation after inverting the transform.
LyapunovParams lyapunov_params(const ControllerKernels& k, const ModalCoefficients& c);

/// zeta1 |X|^2 + zeta2 int e^{delta x} s' S^-1 s + int e^{-delta x} p' S^-1 p.
double lyapunov_value(const LyapunovParams& p, const Mat3& sigma_inv, const Grid1D& g,
                      const Field3& sigma, const Field3& psi, const Vec3& X);

/// Same functional with sigma on the Z lattices and psi = Y on the Y
/// lattices, each by the lattice trapezoid rule.
double lyapunov_value(const LyapunovParams& p, const Mat3& sigma_inv,
                      const CharacteristicLattices& lat,
                      const std::array<Eigen::VectorXd, 3>& sigma, const LatticeState& s);

/// Counts steps with V(t+dt) > V(t) e^{-c' dt} + tol V(0) after a warm-up.
class LyapunovMonitor {
 public:
  LyapunovMonitor(double cprime, double dt, int skip = 10, double rel_tol = 1e-9)
      : cprime_(cprime), dt_(dt), skip_(skip), tol_(rel_tol) {}
  void push(double V);
  int violations() const { return violations_; }
  double worst_ratio() const { return worst_; }
  const std::vector<double>& values() const { return v_; }

 private:
  double cprime_, dt_;
  int skip_;
  double tol_;
  std::vector<double> v_;
  int violations_ = 0;
  double worst_ = 0.0;
};

}  // namespace plate
