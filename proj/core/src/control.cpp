#include "plate/control.hpp"

#include <cmath>
#include <numbers>

#include "plate/errors.hpp"
#include "plate/modal.hpp"

namespace plate {

namespace {

double trapezoid(const Eigen::VectorXd& f, double h) {
  const Eigen::Index n = f.size();
  double acc = 0.5 * (f(0) + f(n - 1));
  for (Eigen::Index k = 1; k + 1 < n; ++k) acc += f(k);
  return acc * h;
}

Vec3 evaluate_law(const GainTables& g, const PhysicalModalState& s, const Vec3& x0) {
  const double h = g.grid.step();
  const Eigen::Index last = static_cast<Eigen::Index>(g.grid.n) - 1;
  const std::array<const Eigen::VectorXd*, 6> fields = {&s.w,     &s.w_t,  &s.alpha,
                                                        &s.alpha_t, &s.beta, &s.beta_t};
  const std::array<double, 6> sign = {1.0, 1.0, -1.0, 1.0, -1.0, 1.0};
  Vec3 law;
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 6; ++j) {
      acc += sign[j] * trapezoid(g.F[i][j].cwiseProduct(*fields[j]), h);
    }
    acc += g.D(i, 0) * s.w(last) - g.D(i, 1) * x0(0);
    acc += g.D(i, 2) * s.alpha(last) - g.D(i, 3) * x0(1);
    acc += g.D(i, 4) * s.beta(last) - g.D(i, 5) * x0(2);
    law(i) = acc;
  }
  return law;
}

Vec3 to_inputs(const Vec3& law, const PhysicalModalState& s, const DimensionlessParams& d) {
  const Eigen::Index last = static_cast<Eigen::Index>(s.grid.n) - 1;
  const double gamma = std::sqrt(d.eps) * d.c1bar;
  Vec3 u;
  u(0) = d.shear_stiffness() *
         (std::exp(-gamma) * law(0) - std::sqrt(d.eps) * s.w_t(last) - s.alpha(last));
  u(1) = law(1) - std::sqrt(d.mu1) * s.alpha_t(last);
  u(2) = law(2) - std::sqrt(d.mu2) * s.beta_t(last);
  return u;
}

void check_grid(const GainTables& g, const PhysicalModalState& s) {
  if (!(g.grid == s.grid)) throw ShapeError("state grid does not match the gain tables");
}

}  // namespace

Eigen::VectorXd sbp_derivative(const Eigen::VectorXd& f, double h) {
  const Eigen::Index n = f.size();
  Eigen::VectorXd out(n);
  if (n < 2) return Eigen::VectorXd::Zero(n);
  out(0) = (f(1) - f(0)) / h;
  out(n - 1) = (f(n - 1) - f(n - 2)) / h;
  for (Eigen::Index k = 1; k + 1 < n; ++k) out(k) = (f(k + 1) - f(k - 1)) / (2.0 * h);
  return out;
}

GainTables build_gain_tables(const ControllerKernels& k, const DimensionlessParams& d, int n,
                             const Grid1D& grid) {
  if (k.grid.m < 3) throw ConfigError("kernel grid too coarse for edge derivatives (m < 3)");
  if (grid.n < 3) throw ConfigError("gain grid needs at least 3 nodes");
  GainTables g;
  g.n = n;
  g.wavenumber = static_cast<double>(n) * std::numbers::pi / d.L;
  g.grid = grid;
  g.phi1 = k.Phi_at(1.0);

  const auto nx = static_cast<Eigen::Index>(grid.n);
  const double h = grid.step();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      g.k_edge[i][j].resize(nx);
      g.l_edge[i][j].resize(nx);
    }
  }
  for (Eigen::Index a = 0; a < nx; ++a) {
    const double xi = grid.at(static_cast<std::size_t>(a));
    const Mat3 ke = k.K_edge(xi), le = k.L_edge(xi);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        g.k_edge[i][j](a) = ke(i, j);
        g.l_edge[i][j](a) = le(i, j);
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      g.k_xi[i][j] = sbp_derivative(g.k_edge[i][j], h);
      g.l_xi[i][j] = sbp_derivative(g.l_edge[i][j], h);
    }
  }

  const double se = std::sqrt(d.eps), sm1 = std::sqrt(d.mu1), sm2 = std::sqrt(d.mu2);
  Eigen::VectorXd e1(nx), e2(nx);
  for (Eigen::Index a = 0; a < nx; ++a) {
    const double xi = grid.at(static_cast<std::size_t>(a));
    e1(a) = riemann_weight1(d, xi);
    e2(a) = riemann_weight2(d, xi);
  }
  const Eigen::Index last = nx - 1;
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd& k1 = g.k_edge[i][0];
    const Eigen::VectorXd& l1 = g.l_edge[i][0];
    const Eigen::VectorXd gw = e1.cwiseProduct(k1) + e2.cwiseProduct(l1);
    g.F[i][0] = -sbp_derivative(gw, h);
    g.F[i][1] = se * (e1.cwiseProduct(k1) - e2.cwiseProduct(l1));
    const Eigen::VectorXd s2 = g.k_edge[i][1] + g.l_edge[i][1];
    g.F[i][2] = sbp_derivative(s2, h);
    g.F[i][3] = sm1 * (g.k_edge[i][1] - g.l_edge[i][1]);
    const Eigen::VectorXd s3 = g.k_edge[i][2] + g.l_edge[i][2];
    g.F[i][4] = sbp_derivative(s3, h);
    g.F[i][5] = sm2 * (g.k_edge[i][2] - g.l_edge[i][2]);

    g.D(i, 0) = gw(last);
    g.D(i, 1) = gw(0) - g.phi1(i, 0);
    g.D(i, 2) = s2(last);
    g.D(i, 3) = s2(0) - g.phi1(i, 1);
    g.D(i, 4) = s3(last);
    g.D(i, 5) = s3(0) - g.phi1(i, 2);
  }
  g.D(2, 2) += g.wavenumber;
  return g;
}

Vec3 state_feedback(const GainTables& g, const PhysicalModalState& s,
                    const DimensionlessParams& d) {
  check_grid(g, s);
  const Vec3 x0(s.w(0), s.alpha(0), s.beta(0));
  return to_inputs(evaluate_law(g, s, x0), s, d);
}

Vec3 output_feedback(const GainTables& g, const PhysicalModalState& estimate,
                     const Vec3& measured_x0, const DimensionlessParams& d) {
  check_grid(g, estimate);
  return to_inputs(evaluate_law(g, estimate, measured_x0), estimate, d);
}

Vec3 hyperbolic_law(const ControllerKernels& k, const HyperbolicModalState& h) {
  const std::size_t nx = h.grid.n;
  const std::vector<double> w = trapezoid_weights(nx, h.grid.step());
  Vec3 u = k.Phi_at(1.0) * h.X;
  for (std::size_t a = 0; a < nx; ++a) {
    const double y = h.grid.at(a);
    const auto c = static_cast<Eigen::Index>(a);
    u += w[a] * (k.K_edge(y) * h.Z.col(c) + k.L_edge(y) * h.Y.col(c));
  }
  return u;
}

Vec3 physical_inputs(const Vec3& U_in, const PhysicalModalState& s, const DimensionlessParams& d,
                     int n) {
  const Eigen::Index last = static_cast<Eigen::Index>(s.grid.n) - 1;
  Vec3 law = U_in;
  law(2) += static_cast<double>(n) * std::numbers::pi / d.L * s.alpha(last);
  return to_inputs(law, s, d);
}

BoundaryTraces sum_modal_inputs(const std::vector<Vec3>& per_mode, const std::vector<double>& y,
                                double L) {
  BoundaryTraces t;
  const auto ny = static_cast<Eigen::Index>(y.size());
  t.U1 = Eigen::VectorXd::Zero(ny);
  t.U2 = Eigen::VectorXd::Zero(ny);
  t.U3 = Eigen::VectorXd::Zero(ny);
  for (std::size_t n = 0; n < per_mode.size(); ++n) {
    const int m = static_cast<int>(n);
    for (Eigen::Index b = 0; b < ny; ++b) {
      const double s = basis_value(Basis::kSine, m, y[static_cast<std::size_t>(b)], L);
      const double c = basis_value(Basis::kCosine, m, y[static_cast<std::size_t>(b)], L);
      t.U1(b) += per_mode[n](0) * s;
      t.U2(b) += per_mode[n](1) * s;
      t.U3(b) += per_mode[n](2) * c;
    }
  }
  return t;
}

}  // namespace plate
