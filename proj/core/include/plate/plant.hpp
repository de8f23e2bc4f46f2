#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "plate/kernels.hpp"
#include "plate/params.hpp"
#include "plate/riemann.hpp"

namespace plate {

/// Component index on the lattices: 0..2 are Z = (p, r, u), 3..5 are Y = (q, s, v).
inline constexpr int kLatticeComponents = 6;

/// Exact characteristic lattices for a fixed time step. Z_i lives on
/// x = 1 - k lambda_i dt, Y_i on x = k lambda_i dt, each closed by the far
/// end point (x = 0 for Z, x = 1 for Y). Positions increase with the index.
class CharacteristicLattices {
 public:
  CharacteristicLattices(const Vec3& lambda, double dt);

  double dt() const { return dt_; }
  const Vec3& lambda() const { return lambda_; }
  const std::vector<double>& x(int c) const { return x_[c]; }
  std::size_t size(int c) const { return x_[c].size(); }
  /// Node fed by the boundary condition: x = 1 for Z, x = 0 for Y.
  std::size_t inflow(int c) const { return c < 3 ? x_[c].size() - 1 : 0; }
  std::size_t outflow(int c) const { return c < 3 ? 0 : x_[c].size() - 1; }

  /// Value at the foot of the characteristic that ends at node q after one step.
  double foot(int c, const Eigen::VectorXd& f, std::size_t q) const {
    const auto lo = foot_[c].lo[q];
    const double w = foot_[c].w[q];
    return w == 0.0 ? f(lo) : (1.0 - w) * f(lo) + w * f(lo + 1);
  }
  /// Samples of field `f` (on lattice `src`) at the nodes of lattice `dst`.
  void resample(int src, const Eigen::VectorXd& f, int dst, Eigen::VectorXd& out) const;
  /// Linear interpolation of lattice-`c` samples at an arbitrary x in [0, 1].
  double value_at(int c, const Eigen::VectorXd& f, double x) const;
  /// Index lo and weight w with x = (1 - w) x[lo] + w x[lo + 1].
  void bracket(int c, double x, std::size_t& lo, double& w) const;
  /// Trapezoid weights of the full lattice.
  const Eigen::VectorXd& weights(int c) const { return trap_[c]; }

 private:
  struct Interp {
    std::vector<std::uint32_t> lo;
    std::vector<double> w;
  };
  Interp table(int c, const std::vector<double>& at) const;

  Vec3 lambda_;
  double dt_;
  std::array<std::vector<double>, kLatticeComponents> x_;
  std::array<Eigen::VectorXd, kLatticeComponents> trap_;
  std::array<Interp, kLatticeComponents> foot_;
  std::array<std::array<Interp, kLatticeComponents>, kLatticeComponents> cross_;
};

/// Plant (or observer) state on the lattices.
struct LatticeState {
  std::array<Eigen::VectorXd, kLatticeComponents> f;
  Vec3 X = Vec3::Zero();
  double t = 0.0;

  static LatticeState zeros(const CharacteristicLattices& lat, double t = 0.0);
  /// Z and Y given as functions of x; X given directly.
  static LatticeState sample(const CharacteristicLattices& lat,
                             const std::function<double(int, double)>& field, const Vec3& X,
                             double t = 0.0);

  Vec3 Z0() const { return Vec3(f[0](0), f[1](0), f[2](0)); }
  Vec3 Z1() const;
  Vec3 Y0() const { return Vec3(f[3](0), f[4](0), f[5](0)); }
  Vec3 Y1() const;
  void set_Z1(const Vec3& z);
  void set_Y0(const Vec3& y);
};

/// Samples on a uniform grid by linear interpolation.
HyperbolicModalState to_grid(const CharacteristicLattices& lat, const LatticeState& s,
                             const Grid1D& g);

using Sources = std::array<Eigen::VectorXd, kLatticeComponents>;

/// In-domain coupling of one mode evaluated on the lattices.
class ModalTransport {
 public:
  ModalTransport(const ModalCoefficients& c, std::shared_ptr<const CharacteristicLattices> lat);

  const CharacteristicLattices& lattices() const { return *lat_; }
  const ModalCoefficients& coefficients() const { return coef_; }

  /// F11 (Z+Y) + F12 (Z-Y) + F13 X + int F14 Z + int F15 Y and the Y
  /// counterpart, at every node. `X` feeds the F13/F23 terms.
  void sources(const LatticeState& s, const Vec3& X, Sources& out) const;

  /// Transport along the characteristics for every node except the inflow
  /// ones. Predictor when s1 is null, trapezoid corrector otherwise.
  void advect(const LatticeState& old, const Sources& s0, const Sources* s1,
              LatticeState& out) const;

  Vec3 drift(const Vec3& X, const Vec3& Z0) const { return coef_.A() * X + coef_.Sigma() * Z0; }
  /// C Z(0) + D X.
  Vec3 inflow_y(const Vec3& Z0, const Vec3& X) const { return coef_.C() * Z0 + coef_.D() * X; }
  /// alpha(1) = x2 + (1/2) int (r + s).
  double alpha_end(const LatticeState& s) const;

 private:
  struct Local {
    int src;
    Eigen::VectorXd coef;
  };
  struct Integral {
    int src;
    Eigen::VectorXd a;  // on the target lattice
    Eigen::VectorXd b;  // on the source lattice
  };
  ModalCoefficients coef_;
  std::shared_ptr<const CharacteristicLattices> lat_;
  std::array<std::vector<Local>, kLatticeComponents> local_;
  std::array<std::vector<Integral>, kLatticeComponents> integral_;
  std::array<std::array<Eigen::VectorXd, 3>, kLatticeComponents> xcoef_;
};

/// Returns Z(1) for a stage state whose other nodes are already set.
using InflowClosure = std::function<Vec3(const LatticeState&)>;

/// Zero force and moments at x = 1: w_x = alpha, alpha_x = 0,
/// beta_x = -(n pi / L) alpha.
InflowClosure free_end_closure(const ModalTransport& m);

/// Quadrature of int_0^x k(x, y) f(y) dy on the lattices, as weights per
/// kernel row and lattice component.
class LatticeQuadrature {
 public:
  /// Rows of K(x, .) act on Z, rows of L(x, .) on Y.
  using KernelRow = std::function<void(double x, double y, Mat3& K, Mat3& L)>;

  LatticeQuadrature(const CharacteristicLattices& lat, double x, const KernelRow& kernel);

  Vec3 apply(const LatticeState& s) const;
  /// Weight each Z_j contributes at its x = 1 node (zero unless x = 1).
  Mat3 end_weights() const { return end_; }

 private:
  std::array<std::array<Eigen::VectorXd, kLatticeComponents>, 3> w_;
  Mat3 end_ = Mat3::Zero();
};

/// Full-state law Z(1) = int K(1,y) Z + int L(1,y) Y + Phi(1) X on the
/// lattices, plus the target map sigma = Z - int K Z - int L Y - Phi X at
/// the nodes of a uniform grid, sharing the quadrature at x = 1.
class LatticeLaw {
 public:
  LatticeLaw(const ControllerKernels& k, const CharacteristicLattices& lat, const Grid1D& g);

  /// U_in with the state's own Z(1).
  Vec3 evaluate(const LatticeState& s) const { return rows_.back().apply(s) + phi_.back() * s.X; }
  /// Z(1) solving Z(1) = U_in(state with that Z(1)) + extra.
  Vec3 solve_inflow(const LatticeState& s, const Vec3& extra = Vec3::Zero()) const;
  Field3 target(const CharacteristicLattices& lat, const LatticeState& s) const;
  /// sigma_i at the nodes of the Z_i lattice: Z_i as stored minus the
  /// integral and X terms interpolated from the grid.
  std::array<Eigen::VectorXd, 3> target_on_lattice(const CharacteristicLattices& lat,
                                                   const LatticeState& s) const;
  const Grid1D& grid() const { return grid_; }
  /// K(1,0) + L(1,0) - Phi(1).
  const Mat3& boundary_gain() const { return d0_; }

 private:
  Grid1D grid_;
  std::vector<LatticeQuadrature> rows_;  // one per grid node, the last at x = 1
  std::vector<Mat3> phi_;
  Mat3 solve_;  // (I - end weights)^-1
  Mat3 d0_;
};

/// One Heun step of the plant alone with the given x = 1 closure.
LatticeState plant_step(const ModalTransport& m, const LatticeState& s,
                        const InflowClosure& closure);

}  // namespace plate
