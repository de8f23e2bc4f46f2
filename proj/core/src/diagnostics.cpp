#include "plate/diagnostics.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace plate {

namespace {

double sq_l2(const Eigen::VectorXd& f, const std::vector<double>& w) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < f.size(); ++k) acc += w[static_cast<std::size_t>(k)] * f(k) * f(k);
  return acc;
}

double norm2(const Mat3& m) {
  return Eigen::JacobiSVD<Mat3>(m).singularValues()(0);
}

}  // namespace

double modal_norm(const PhysicalModalState& s) {
  const std::vector<double> w = trapezoid_weights(s.grid.n, s.grid.step());
  return sq_l2(s.w, w) + sq_l2(s.w_x, w) + sq_l2(s.alpha, w) + sq_l2(s.alpha_x, w) +
         sq_l2(s.beta, w) + sq_l2(s.beta_x, w) + sq_l2(s.w_t, w) + sq_l2(s.alpha_t, w) +
         sq_l2(s.beta_t, w);
}

double plate_norm_term(const PhysicalModalState& s, int n, double L) {
  const std::vector<double> w = trapezoid_weights(s.grid.n, s.grid.step());
  const double k = static_cast<double>(n) * std::numbers::pi / L;
  const double sine = n == 0 ? 0.0 : 0.5 * L;
  const double cosine = n == 0 ? L : 0.5 * L;
  const double ky = 1.0 + k * k;
  return sine * (ky * sq_l2(s.w, w) + sq_l2(s.w_x, w) + sq_l2(s.w_t, w)) +
         sine * (ky * sq_l2(s.alpha, w) + sq_l2(s.alpha_x, w) + sq_l2(s.alpha_t, w)) +
         cosine * (ky * sq_l2(s.beta, w) + sq_l2(s.beta_x, w) + sq_l2(s.beta_t, w));
}

double plate_norm(const std::vector<PhysicalModalState>& modes, double L) {
  double total = 0.0;
  for (std::size_t n = 0; n < modes.size(); ++n) total += plate_norm_term(modes[n], static_cast<int>(n), L);
  return total;
}

double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v, double t0,
                      double t1) {
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < t.size() && k < v.size(); ++k) {
    if (t[k] < t0 - 1e-12 || t[k] > t1 + 1e-12 || !(v[k] > 0.0)) continue;
    const double y = std::log(v[k]);
    st += t[k];
    sy += y;
    stt += t[k] * t[k];
    sty += t[k] * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("decay fit needs at least two positive samples");
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  return -slope;
}

Field3 target_state(const ControllerKernels& k, const HyperbolicModalState& h) {
  const std::size_t nx = h.grid.n;
  const double dx = h.grid.step();
  Field3 sigma(3, static_cast<Eigen::Index>(nx));
  for (std::size_t a = 0; a < nx; ++a) {
    const bool edge = a + 1 == nx;
    const double x = edge ? 1.0 : h.grid.at(a);
    Vec3 acc = Vec3::Zero();
    for (std::size_t b = 0; b <= a && a > 0; ++b) {
      const double w = (b == 0 || b == a) ? 0.5 * dx : dx;
      const double y = h.grid.at(b);
      const Mat3 K = edge ? k.K_edge(y) : k.K_at(x, y);
      const Mat3 L = edge ? k.L_edge(y) : k.L_at(x, y);
      const auto c = static_cast<Eigen::Index>(b);
      acc += w * (K * h.Z.col(c) + L * h.Y.col(c));
    }
    const auto c = static_cast<Eigen::Index>(a);
    sigma.col(c) = h.Z.col(c) - acc - k.Phi_at(x) * h.X;
  }
  return sigma;
}

TargetCheck target_transform_check(const ControllerKernels& k, const ModalCoefficients& c,
                                   const HyperbolicModalState& before,
                                   const HyperbolicModalState& after) {
  const Field3 s0 = target_state(k, before);
  const Field3 s1 = target_state(k, after);
  const double dt = after.t - before.t;
  const double dx = before.grid.step();
  const Eigen::Index n = s0.cols();
  TargetCheck out;
  out.sigma_end = std::max(s0.col(n - 1).cwiseAbs().maxCoeff(), s1.col(n - 1).cwiseAbs().maxCoeff());
  for (Eigen::Index a = 0; a + 1 < n; ++a) {
    const Vec3 st = 0.5 * ((s1.col(a) - s0.col(a)) + (s1.col(a + 1) - s0.col(a + 1))) / dt;
    const Vec3 sx = 0.5 * ((s0.col(a + 1) - s0.col(a)) + (s1.col(a + 1) - s1.col(a))) / dx;
    const Vec3 mid = 0.25 * (s0.col(a) + s0.col(a + 1) + s1.col(a) + s1.col(a + 1));
    const double x = (static_cast<double>(a) + 0.5) * dx;
    const Vec3 r = st - c.Sigma() * sx - k.Omega_at(x) * mid;
    out.pde = std::max(out.pde, r.cwiseAbs().maxCoeff());
  }
  const Mat3 E1 = c.Sigma() * k.Phi_at(0.0) + c.A();
  const Vec3 xdot = (after.X - before.X) / dt;
  const Vec3 r = xdot - E1 * 0.5 * (after.X + before.X) - c.Sigma() * 0.5 * (s0.col(0) + s1.col(0));
  out.ode = r.cwiseAbs().maxCoeff();
  return out;
}

LyapunovParams lyapunov_params(const ControllerKernels& k, const ModalCoefficients& c) {
  const TriangleGrid& tg = k.grid;
  const int m = tg.m;
  const double h = tg.delta();
  auto xs = [&](int a) { return tg.coord(a); };
  auto at = [&](const MatField& f, int a, int b) -> const Mat3& { return f[tg.index(a, b)]; };

  // Resolvent of K: R = K + int_y^x K(x,s) R(s,y) ds.
  MatField R(tg.size(), Mat3::Zero()), Li(tg.size(), Mat3::Zero());
  std::vector<Mat3> Phii(static_cast<std::size_t>(m));
  for (int b = 0; b < m; ++b) {
    for (int a = b; a < m; ++a) {
      Mat3 acc = at(k.K, a, b);
      for (int s = b; s < a; ++s) {
        const double w = s == b ? 0.5 * h : h;
        acc += w * at(k.K, a, s) * R[tg.index(s, b)];
      }
      const Mat3 lhs = a == b ? Mat3::Identity() : Mat3(Mat3::Identity() - 0.5 * h * at(k.K, a, a));
      R[tg.index(a, b)] = lhs.inverse() * acc;
    }
  }
  auto trap = [&](int lo, int hi, const std::function<Mat3(int)>& f) {
    Mat3 acc = Mat3::Zero();
    for (int s = lo; s <= hi; ++s) {
      const double w = (s == lo || s == hi) ? 0.5 * h : h;
      if (hi > lo) acc += w * f(s);
    }
    return acc;
  };
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b <= a; ++b) {
      Li[tg.index(a, b)] =
          at(k.L, a, b) + trap(b, a, [&](int s) { return Mat3(R[tg.index(a, s)] * at(k.L, s, b)); });
    }
    Phii[static_cast<std::size_t>(a)] =
        k.Phi[static_cast<std::size_t>(a)] +
        trap(0, a, [&](int s) { return Mat3(R[tg.index(a, s)] * k.Phi[static_cast<std::size_t>(s)]); });
  }

  const Mat3 Si = c.SigmaInv();
  const Mat3 E2 = c.C() * k.Phi[0] + c.D();
  LyapunovParams p;
  p.cprime = 2.0 * k.delta.minCoeff() - 1.0;
  p.M[0] = std::pow(norm2(E2), 2) + 1.0;
  p.zeta1 = p.M[0] + 1.0;
  p.M[1] = std::pow(norm2(p.zeta1 * c.Sigma() + E2.transpose() * c.C()), 2) +
           std::pow(norm2(c.C()), 2);
  double m3 = 0.0, m4 = 0.0, m5 = 0.0, m6 = 0.0, fmin = 0.0, om = 0.0;
  for (int a = 0; a < m; ++a) {
    const double x = xs(a);
    const Mat3 Fp = c.F21(x) + c.F22(x);
    m3 = std::max(m3, std::pow(norm2(Si * Fp), 2));
    fmin = std::max(fmin, norm2(c.F21(x) - c.F22(x)));
    om = std::max(om, norm2(k.Omega[static_cast<std::size_t>(a)]));
    const Mat3 xi1 = Fp * Phii[static_cast<std::size_t>(a)] + c.F23(x) +
                     trap(0, a, [&](int s) { return Mat3(c.F24(x, xs(s)) * Phii[static_cast<std::size_t>(s)]); });
    m4 = std::max(m4, std::pow(norm2((Si * xi1).transpose()), 2));
    for (int b = 0; b <= a; ++b) {
      const double y = xs(b);
      const Mat3 xi2 = Fp * R[tg.index(a, b)] + c.F24(x, y) +
                       trap(b, a, [&](int s) { return Mat3(c.F24(x, xs(s)) * R[tg.index(s, b)]); });
      const Mat3 xi3 = Fp * Li[tg.index(a, b)] + c.F25(x, y) +
                       trap(b, a, [&](int s) { return Mat3(c.F24(x, xs(s)) * Li[tg.index(s, b)]); });
      m5 = std::max(m5, std::pow(norm2(Si * xi2), 2));
      m6 = std::max(m6, std::pow(norm2(Si * xi3), 2));
    }
  }
  p.M[2] = m3;
  p.M[3] = m4;
  p.M[4] = m5;
  p.M[5] = 1.0 + m6;
  p.zeta2 = std::max(p.M[2] + p.M[4], p.M[1]) + 1.0;
  const double si = norm2(Si);
  p.delta = std::max((2.0 * fmin + p.cprime) * si + p.M[5] + p.M[3] + 2.0,
                     (p.cprime + 2.0 * om) * si + 1.0) +
            1.0;
  return p;
}

double lyapunov_value(const LyapunovParams& p, const Mat3& sigma_inv, const Grid1D& g,
                      const Field3& sigma, const Field3& psi, const Vec3& X) {
  const std::vector<double> w = trapezoid_weights(g.n, g.step());
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    const double x = g.at(k);
    a += w[k] * std::exp(p.delta * x) * sigma.col(c).dot(sigma_inv * sigma.col(c));
    b += w[k] * std::exp(-p.delta * x) * psi.col(c).dot(sigma_inv * psi.col(c));
  }
  return p.zeta1 * X.squaredNorm() + p.zeta2 * a + b;
}

double lyapunov_value(const LyapunovParams& p, const Mat3& sigma_inv,
                      const CharacteristicLattices& lat,
                      const std::array<Eigen::VectorXd, 3>& sigma, const LatticeState& s) {
  double a = 0.0, b = 0.0;
  for (int i = 0; i < 3; ++i) {
    const std::vector<double>& xz = lat.x(i);
    const std::vector<double>& xy = lat.x(i + 3);
    const Eigen::VectorXd& wz = lat.weights(i);
    const Eigen::VectorXd& wy = lat.weights(i + 3);
    const double si = sigma_inv(i, i);
    for (Eigen::Index q = 0; q < wz.size(); ++q) {
      a += wz(q) * std::exp(p.delta * xz[static_cast<std::size_t>(q)]) * si * sigma[i](q) * sigma[i](q);
    }
    for (Eigen::Index q = 0; q < wy.size(); ++q) {
      const double y = s.f[i + 3](q);
      b += wy(q) * std::exp(-p.delta * xy[static_cast<std::size_t>(q)]) * si * y * y;
    }
  }
  return p.zeta1 * s.X.squaredNorm() + p.zeta2 * a + b;
}

void LyapunovMonitor::push(double V) {
  v_.push_back(V);
  const std::size_t k = v_.size() - 1;
  if (k == 0 || static_cast<int>(k) <= skip_) return;
  const double bound = v_[k - 1] * std::exp(-cprime_ * dt_) + tol_ * v_[0];
  if (V > bound) ++violations_;
  if (v_[k - 1] > 0.0) worst_ = std::max(worst_, V / (v_[k - 1] * std::exp(-cprime_ * dt_)));
}

}  // namespace plate
