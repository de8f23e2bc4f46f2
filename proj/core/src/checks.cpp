#include "plate/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plate/modal.hpp"

namespace plate {

PhysicalModalState random_smooth_state(const Grid1D& g, std::mt19937_64& rng, bool sbp_slopes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double c[6][4];
  double phase[6][4];
  for (int q = 0; q < 6; ++q) {
    for (int j = 0; j < 4; ++j) {
      c[q][j] = u(rng);
      phase[q][j] = u(rng);
    }
  }
  auto f = [&](int q, double x) {
    double v = 0.0;
    for (int j = 0; j < 4; ++j) v += c[q][j] * std::cos(1.3 * j * x + phase[q][j]);
    return v;
  };
  auto fx = [&](int q, double x) {
    double v = 0.0;
    for (int j = 0; j < 4; ++j) v -= c[q][j] * 1.3 * j * std::sin(1.3 * j * x + phase[q][j]);
    return v;
  };
  PhysicalModalState s = PhysicalModalState::zeros(g);
  for (std::size_t a = 0; a < g.n; ++a) {
    const auto k = static_cast<Eigen::Index>(a);
    const double x = g.at(a);
    s.w(k) = f(0, x);
    s.alpha(k) = f(1, x);
    s.beta(k) = f(2, x);
    s.w_t(k) = f(3, x);
    s.alpha_t(k) = f(4, x);
    s.beta_t(k) = f(5, x);
    s.w_x(k) = fx(0, x);
    s.alpha_x(k) = fx(1, x);
    s.beta_x(k) = fx(2, x);
  }
  if (sbp_slopes) {
    s.w_x = sbp_derivative(s.w, g.step());
    s.alpha_x = sbp_derivative(s.alpha, g.step());
    s.beta_x = sbp_derivative(s.beta, g.step());
  }
  return s;
}

double dual_gain_deviation(const ControllerKernels& k, const DimensionlessParams& d, int n,
                           const Grid1D& g, int trials, std::uint64_t seed, bool sbp_slopes) {
  const GainTables gt = build_gain_tables(k, d, n, g);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const PhysicalModalState s = random_smooth_state(g, rng, sbp_slopes);
    const Vec3 hyper = physical_inputs(hyperbolic_law(k, to_hyperbolic(s, d)), s, d, n);
    const Vec3 phys = state_feedback(gt, s, d);
    const double scale = std::max(phys.cwiseAbs().maxCoeff(), 1e-300);
    worst = std::max(worst, (hyper - phys).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

double riemann_roundtrip_error(const DimensionlessParams& d, const Grid1D& g, int trials,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    HyperbolicModalState h = HyperbolicModalState::zeros(g);
    for (Eigen::Index k = 0; k < h.Z.cols(); ++k) {
      for (int i = 0; i < 3; ++i) {
        h.Z(i, k) = u(rng);
        h.Y(i, k) = u(rng);
      }
    }
    h.X = Vec3(u(rng), u(rng), u(rng));
    const HyperbolicModalState back = to_hyperbolic(to_physical(h, d), d);
    worst = std::max({worst, (back.Z - h.Z).cwiseAbs().maxCoeff(),
                      (back.Y - h.Y).cwiseAbs().maxCoeff(), (back.X - h.X).cwiseAbs().maxCoeff()});
  }
  return worst;
}

double modal_roundtrip_error(int N, double L, int y_points, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<double> y = uniform_y_grid(y_points, L);
  const int nx = 5;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    for (Basis b : {Basis::kSine, Basis::kCosine}) {
      Eigen::MatrixXd coeffs(N + 1, nx);
      for (int n = 0; n <= N; ++n) {
        for (int a = 0; a < nx; ++a) coeffs(n, a) = (b == Basis::kSine && n == 0) ? 0.0 : u(rng);
      }
      const Eigen::MatrixXd field = reconstruct(coeffs, b, y, L);
      const Eigen::MatrixXd back = project(field, b, N, L);
      worst = std::max(worst, (back - coeffs).cwiseAbs().maxCoeff());
      const Eigen::MatrixXd again = reconstruct(back, b, y, L);
      worst = std::max(worst, (again - field).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double e1_diagonal_error(const ControllerKernels& k, const ModalCoefficients& c) {
  const Mat3 E1 = c.Sigma() * k.Phi[0] + c.A();
  const Mat3 target = (-k.delta).asDiagonal();
  return (E1 - target).cwiseAbs().maxCoeff();
}

std::string compare_kernel_records(const std::vector<KernelRecord>& stored,
                                   const std::vector<KernelRecord>& fresh, double rel_tol) {
  std::ostringstream os;
  if (stored.size() != fresh.size()) {
    os << "row count " << stored.size() << " != " << fresh.size();
    return os.str();
  }
  for (std::size_t r = 0; r < stored.size(); ++r) {
    const KernelRecord& a = stored[r];
    const KernelRecord& b = fresh[r];
    const auto close = [rel_tol](double u, double v) {
      return std::abs(u - v) <= rel_tol * std::max(1.0, std::abs(v));
    };
    if (a.n != b.n || a.block != b.block || a.i != b.i || a.j != b.j || !close(a.x, b.x) ||
        !close(a.y, b.y) || !close(a.value, b.value)) {
      os << "row " << r + 1 << " (" << b.block << ' ' << b.i << b.j << " at x=" << b.x
         << ", y=" << b.y << "): stored " << a.value << ", expected " << b.value;
      return os.str();
    }
  }
  return {};
}

}  // namespace plate
