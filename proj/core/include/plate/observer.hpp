#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "plate/kernels.hpp"
#include "plate/plant.hpp"
#include "plate/riemann.hpp"

namespace plate {

/// What the observer of one mode sees: Z(t, 0) = (p, r, u)(0) and X.
struct Measurements {
  Vec3 Z0 = Vec3::Zero();
  Vec3 X = Vec3::Zero();
};

/// Clamped-edge traces of the plate along y.
struct EdgeTraces {
  std::vector<double> y;
  Eigen::VectorXd w, alpha, beta, w_x, alpha_x, beta_x, w_t, alpha_t, beta_t;
};

/// Sums per-mode x = 0 samples into traces (sine for w, alpha; cosine for beta).
EdgeTraces edge_traces(const std::vector<PhysicalModalState>& modes, const std::vector<double>& y,
                       double L);

/// Modal projections of the edge traces, one entry per mode 0..N.
std::vector<Measurements> extract_measurements(const EdgeTraces& traces,
                                               const DimensionlessParams& d, int N);

/// Observer tables of one mode on the plant lattices.
class ModalObserver {
 public:
  ModalObserver(const ObserverKernels& k, const ModalTransport& m, const Grid1D& g);

  const ModalTransport& transport() const { return *m_; }
  const Mat3& R() const { return R_; }
  const Mat3& Lx() const { return Lx_; }

  /// Adds P-(x) e (Z rows) and P+(x) e (Y rows) to the sources.
  void inject(const Vec3& e, Sources& out) const;
  /// A X + Sigma Z(0) + Lx (X - Xhat), with measured X and Z(0).
  Vec3 drift(const Vec3& xhat, const Measurements& m) const {
    return m_->drift(m.X, m.Z0) + Lx_ * (m.X - xhat);
  }

  /// Solves Z~ = s + int_0^x N s, Y~ = p + int_0^x M s for (s, p) on the grid.
  void invert(const Field3& Zt, const Field3& Yt, Field3& sigma, Field3& psi) const;
  const Grid1D& grid() const { return grid_; }

 private:
  const ModalTransport* m_;
  Mat3 R_, Lx_;
  std::array<std::array<Eigen::VectorXd, 3>, kLatticeComponents> p_;
  Grid1D grid_;
  std::vector<Mat3> Nq_, Mq_;  // N(x_a, x_b), M(x_a, x_b) at grid nodes, b <= a
  std::vector<Mat3> diag_inv_;
};

/// x = 1 closure of the observer: receives the observer stage state and
/// the plant measurements at the same stage.
using ObserverClosure = std::function<Vec3(const LatticeState& obs, const Measurements& m)>;

/// One Heun step of the observer, with measurements at the start and the
/// end of the step. Y^(0) is set from the measurements.
LatticeState observer_step(const ModalObserver& ob, const LatticeState& o, const Measurements& m0,
                           const Measurements& m1, const ObserverClosure& closure);

/// Plant and observer advanced together, stage by stage. The plant closure
/// sees the observer stage state after the observer's own closure.
using PlantClosure = std::function<Vec3(const LatticeState& plant, const LatticeState& obs)>;
void coupled_step(const ModalObserver& ob, LatticeState& plant, LatticeState& obs,
                  const PlantClosure& plant_closure, const ObserverClosure& obs_closure);

/// Estimated physical state from the observer state.
PhysicalModalState reconstruct_estimates(const CharacteristicLattices& lat, const LatticeState& o,
                                         const Grid1D& g, const DimensionlessParams& d);

struct ErrorNorms {
  double sigma = 0.0;  // L2 norm of sigma~ over all three components
  double psi = 0.0;
  double X = 0.0;      // |X~|
  Vec3 X_abs = Vec3::Zero();
  double Omega_nf = 0.0;
};

ErrorNorms error_diagnostics(const ModalObserver& ob, const LatticeState& plant,
                             const LatticeState& obs, const DimensionlessParams& d);

}  // namespace plate
