#include "plate/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "goursat.hpp"
#include "plate/errors.hpp"

namespace plate {

namespace {

double max_abs_over_x(const std::function<Mat3(double)>& f, int samples) {
  double out = 0.0;
  for (int a = 0; a < samples; ++a) {
    out = std::max(out, f(static_cast<double>(a) / (samples - 1)).cwiseAbs().maxCoeff());
  }
  return out;
}

double max_abs_over_triangle(const std::function<Mat3(double, double)>& f, int samples) {
  double out = 0.0;
  for (int a = 0; a < samples; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double x = static_cast<double>(a) / (samples - 1);
      const double y = static_cast<double>(b) / (samples - 1);
      out = std::max(out, f(x, y).cwiseAbs().maxCoeff());
    }
  }
  return out;
}

// Value of entry (i, j) of a triangle field on the edge x = 1 at height y,
// with an optional jump at y = cut.
double edge_value(const TriangleGrid& g, const MatField& f, int i, int j, double y,
                  double cut) {
  std::vector<double> col(static_cast<std::size_t>(g.m));
  for (int b = 0; b < g.m; ++b) col[b] = f[g.index(g.m - 1, b)](i, j);
  return interp_uniform_cut(col, y, cut);
}

}  // namespace

namespace detail {

double certificate_m_bar(const ModalCoefficients& c, double S_bar) {
  const int s = 41;
  const auto P1 = [&](double x) { return Mat3(c.F11(x) + c.F12(x)); };
  const auto P2 = [&](double x) { return Mat3(c.F11(x) - c.F12(x)); };
  const auto Q1 = [&](double x) { return Mat3(c.F21(x) + c.F22(x)); };
  const auto Q2 = [&](double x) { return Mat3(c.F21(x) - c.F22(x)); };
  const double sigma_bar = std::max({max_abs_over_x(P1, s), max_abs_over_x(P2, s),
                                     max_abs_over_x(Q1, s), max_abs_over_x(Q2, s)});
  const double f_bar = std::max(
      {max_abs_over_triangle([&](double x, double y) { return c.F14(x, y); }, s),
       max_abs_over_triangle([&](double x, double y) { return c.F15(x, y); }, s),
       max_abs_over_triangle([&](double x, double y) { return c.F24(x, y); }, s),
       max_abs_over_triangle([&](double x, double y) { return c.F25(x, y); }, s)});
  const double eps_bar =
      std::max(max_abs_over_x([&](double x) { return c.F13(x); }, s),
               max_abs_over_x([&](double x) { return c.F23(x); }, s));
  const double a_bar = c.A().cwiseAbs().maxCoeff();
  const double d_bar = c.D().cwiseAbs().maxCoeff();
  const double c_bar = c.C().cwiseAbs().maxCoeff();
  const double lam_hi = c.lambda(2);
  const double lam_lo = 1.0 / c.lambda(0);
  double mu_bar = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int p = 0; p < 3; ++p) mu_bar = std::max(mu_bar, std::abs(c.lambda(i) - c.lambda(p)));
  }
  return 3.0 * lam_hi * lam_lo * c_bar * (6.0 * sigma_bar + 3.0 * mu_bar * S_bar + 3.0 * f_bar) +
         3.0 * a_bar + 3.0 * lam_hi * d_bar + 6.0 * mu_bar * S_bar + 6.0 * eps_bar +
         6.0 * sigma_bar + 6.0 * f_bar;
}

BoundCertificate make_certificate(const ModalCoefficients& c, double phi_bar, double max_abs) {
  BoundCertificate cert;
  cert.phi_bar = phi_bar;
  cert.max_abs = max_abs;
  cert.m_bar = certificate_m_bar(c, max_abs);
  cert.M = cert.m_bar * phi_bar / c.lambda(0);
  const double bound = phi_bar * std::exp(std::min(cert.M, 700.0));
  cert.holds = max_abs <= bound * (1.0 + 1e-12);
  return cert;
}

}  // namespace detail

JumpLine ControllerKernels::jump_line(int i, int j) const {
  return JumpLine{0.0, 0.0, lambda(j) / lambda(i)};
}

Mat3 ControllerKernels::K_at(double x, double y) const {
  const TriStencil base = locate(grid, x, y);
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i > j) {
        const JumpLine line = jump_line(i, j);
        out(i, j) = eval_stencil(side_stencil(grid, x, y, &line, 1), K, i, j);
      } else {
        out(i, j) = eval_stencil(base, K, i, j);
      }
    }
  }
  return out;
}

Mat3 ControllerKernels::L_at(double x, double y) const {
  const TriStencil base = locate(grid, x, y);
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out(i, j) = eval_stencil(base, L, i, j);
  }
  return out;
}

Mat3 ControllerKernels::K_edge(double y) const {
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double cut = i > j ? lambda(j) / lambda(i) : -1.0;
      out(i, j) = edge_value(grid, K, i, j, y, cut);
    }
  }
  return out;
}

Mat3 ControllerKernels::L_edge(double y) const {
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out(i, j) = edge_value(grid, L, i, j, y, -1.0);
  }
  return out;
}

ControllerKernels solve_controller_kernels(const ModalCoefficients& c, const Vec3& delta,
                                           const KernelOptions& opt, Phi32Mode phi32) {
  for (int i = 0; i < 3; ++i) {
    if (!(delta(i) > 0.0)) throw ConfigError("design parameters delta must be positive");
  }
  ControllerKernels k = solve_controller_kernels(c, delta, c.Phi0(delta, phi32), opt);
  k.phi32 = phi32;
  return k;
}

ControllerKernels solve_controller_kernels(const ModalCoefficients& c, const Vec3& delta,
                                           const Mat3& phi0, const KernelOptions& opt) {
  c.params().validate();
  detail::GoursatSystem sys;
  sys.lambda = Vec3(c.lambda(0), c.lambda(1), c.lambda(2));
  sys.grid = TriangleGrid{opt.m};
  sys.A1 = [&c](double y) -> Mat3 { return c.F11(y) + c.F12(y); };
  sys.B1 = [&c](double y) -> Mat3 { return c.F21(y) + c.F22(y); };
  sys.A2 = [&c](double y) -> Mat3 { return c.F11(y) - c.F12(y); };
  sys.B2 = [&c](double y) -> Mat3 { return c.F21(y) - c.F22(y); };
  sys.G1 = [&c](double x, double y) -> Mat3 { return -c.F14(x, y); };
  sys.G2 = [&c](double x, double y) -> Mat3 { return -c.F15(x, y); };
  sys.E1 = [&c](double s, double y) { return c.F14(s, y); };
  sys.H1 = [&c](double s, double y) { return c.F24(s, y); };
  sys.E2 = [&c](double s, double y) { return c.F15(s, y); };
  sys.H2 = [&c](double s, double y) { return c.F25(s, y); };
  sys.Rb = c.Sigma() * c.C() * c.SigmaInv();
  sys.has_phi = true;
  sys.phi0 = phi0;
  sys.A = c.A();
  sys.D = c.D();
  sys.F13 = [&c](double x) { return c.F13(x); };
  sys.F23 = [&c](double x) { return c.F23(x); };
  sys.tol = opt.tol;
  sys.max_iter = opt.max_iter;

  auto sol = detail::solve_goursat(sys);
  ControllerKernels k;
  k.n = c.mode();
  k.grid = sys.grid;
  k.lambda = sys.lambda;
  k.delta = delta;
  k.K = std::move(sol.K);
  k.L = std::move(sol.L);
  k.Phi = std::move(sol.Phi);
  k.Omega = std::move(sol.Omega);
  k.increments = std::move(sol.increments);
  k.iterations = sol.iterations;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < k.K.size(); ++i) {
    max_abs = std::max({max_abs, k.K[i].cwiseAbs().maxCoeff(), k.L[i].cwiseAbs().maxCoeff()});
  }
  for (const auto& p : k.Phi) max_abs = std::max(max_abs, p.cwiseAbs().maxCoeff());
  k.certificate = detail::make_certificate(c, sol.first_iterate_max, max_abs);
  return k;
}

}  // namespace plate
