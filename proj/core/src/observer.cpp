#include "plate/observer.hpp"

#include <cmath>

#include <Eigen/LU>

#include "plate/diagnostics.hpp"
#include "plate/errors.hpp"
#include "plate/modal.hpp"

namespace plate {

namespace {

Eigen::VectorXd sum_basis(const std::vector<PhysicalModalState>& modes,
                          const Eigen::VectorXd PhysicalModalState::*field, Basis b,
                          const std::vector<double>& y, double L) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(y.size()));
  for (std::size_t n = 0; n < modes.size(); ++n) {
    const double v = (modes[n].*field)(0);
    for (std::size_t k = 0; k < y.size(); ++k) {
      out(static_cast<Eigen::Index>(k)) += v * basis_value(b, static_cast<int>(n), y[k], L);
    }
  }
  return out;
}

std::vector<double> as_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

EdgeTraces edge_traces(const std::vector<PhysicalModalState>& modes, const std::vector<double>& y,
                       double L) {
  EdgeTraces t;
  t.y = y;
  t.w = sum_basis(modes, &PhysicalModalState::w, Basis::kSine, y, L);
  t.alpha = sum_basis(modes, &PhysicalModalState::alpha, Basis::kSine, y, L);
  t.beta = sum_basis(modes, &PhysicalModalState::beta, Basis::kCosine, y, L);
  t.w_x = sum_basis(modes, &PhysicalModalState::w_x, Basis::kSine, y, L);
  t.alpha_x = sum_basis(modes, &PhysicalModalState::alpha_x, Basis::kSine, y, L);
  t.beta_x = sum_basis(modes, &PhysicalModalState::beta_x, Basis::kCosine, y, L);
  t.w_t = sum_basis(modes, &PhysicalModalState::w_t, Basis::kSine, y, L);
  t.alpha_t = sum_basis(modes, &PhysicalModalState::alpha_t, Basis::kSine, y, L);
  t.beta_t = sum_basis(modes, &PhysicalModalState::beta_t, Basis::kCosine, y, L);
  return t;
}

std::vector<Measurements> extract_measurements(const EdgeTraces& t, const DimensionlessParams& d,
                                               int N) {
  const double L = d.L;
  const Eigen::VectorXd p = t.w_x + std::sqrt(d.eps) * t.w_t;
  const Eigen::VectorXd r = t.alpha_x + std::sqrt(d.mu1) * t.alpha_t;
  const Eigen::VectorXd u = t.beta_x + std::sqrt(d.mu2) * t.beta_t;
  const auto pn = project(as_std(p), Basis::kSine, N, L);
  const auto rn = project(as_std(r), Basis::kSine, N, L);
  const auto un = project(as_std(u), Basis::kCosine, N, L);
  const auto wn = project(as_std(t.w), Basis::kSine, N, L);
  const auto an = project(as_std(t.alpha), Basis::kSine, N, L);
  const auto bn = project(as_std(t.beta), Basis::kCosine, N, L);
  std::vector<Measurements> out(static_cast<std::size_t>(N + 1));
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n].Z0 = Vec3(pn[n], rn[n], un[n]);
    out[n].X = Vec3(wn[n], an[n], bn[n]);
  }
  return out;
}

ModalObserver::ModalObserver(const ObserverKernels& k, const ModalTransport& m, const Grid1D& g)
    : m_(&m), R_(k.R), Lx_(k.Lx), grid_(g) {
  const CharacteristicLattices& lat = m.lattices();
  for (int c = 0; c < kLatticeComponents; ++c) {
    const std::vector<double>& xs = lat.x(c);
    const auto n = static_cast<Eigen::Index>(xs.size());
    for (auto& v : p_[c]) v.resize(n);
    const int i = c % 3;
    for (Eigen::Index q = 0; q < n; ++q) {
      const double x = xs[static_cast<std::size_t>(q)];
      const Mat3 P = c < 3 ? k.Pminus_at(x) : k.Pplus_at(x);
      for (int j = 0; j < 3; ++j) p_[c][j](q) = P(i, j);
    }
  }
  const std::size_t nx = g.n;
  const double h = g.step();
  Nq_.resize(nx * nx, Mat3::Zero());
  Mq_.resize(nx * nx, Mat3::Zero());
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      Nq_[a * nx + b] = k.N_at(g.at(a), g.at(b));
      Mq_[a * nx + b] = k.M_at(g.at(a), g.at(b));
    }
  }
  diag_inv_.resize(nx);
  diag_inv_[0] = Mat3::Identity();
  for (std::size_t a = 1; a < nx; ++a) {
    diag_inv_[a] = (Mat3::Identity() + 0.5 * h * Nq_[a * nx + a]).inverse();
  }
}

void ModalObserver::inject(const Vec3& e, Sources& out) const {
  for (int c = 0; c < kLatticeComponents; ++c) {
    out[c] += p_[c][0] * e(0) + p_[c][1] * e(1) + p_[c][2] * e(2);
  }
}

void ModalObserver::invert(const Field3& Zt, const Field3& Yt, Field3& sigma, Field3& psi) const {
  const std::size_t nx = grid_.n;
  const double h = grid_.step();
  sigma.resize(3, static_cast<Eigen::Index>(nx));
  psi.resize(3, static_cast<Eigen::Index>(nx));
  for (std::size_t a = 0; a < nx; ++a) {
    Vec3 rhs = Zt.col(static_cast<Eigen::Index>(a));
    Vec3 acc = Vec3::Zero();
    for (std::size_t b = 0; b < a; ++b) {
      const double w = b == 0 ? 0.5 * h : h;
      rhs -= w * Nq_[a * nx + b] * sigma.col(static_cast<Eigen::Index>(b));
      acc += w * Mq_[a * nx + b] * sigma.col(static_cast<Eigen::Index>(b));
    }
    const Vec3 s = diag_inv_[a] * rhs;
    sigma.col(static_cast<Eigen::Index>(a)) = s;
    if (a > 0) acc += 0.5 * h * Mq_[a * nx + a] * s;
    psi.col(static_cast<Eigen::Index>(a)) = Yt.col(static_cast<Eigen::Index>(a)) - acc;
  }
}

LatticeState observer_step(const ModalObserver& ob, const LatticeState& o, const Measurements& m0,
                           const Measurements& m1, const ObserverClosure& closure) {
  const ModalTransport& m = ob.transport();
  const double dt = m.lattices().dt();
  Sources s0, s1;
  m.sources(o, m0.X, s0);
  ob.inject(m0.Z0 - o.Z0(), s0);
  LatticeState p = o;
  m.advect(o, s0, nullptr, p);
  const Vec3 g0 = ob.drift(o.X, m0);
  p.X = o.X + dt * g0;
  p.t = o.t + dt;
  p.set_Y0(m.inflow_y(m1.Z0, m1.X));
  p.set_Z1(closure(p, m1));

  m.sources(p, m1.X, s1);
  ob.inject(m1.Z0 - p.Z0(), s1);
  LatticeState out = o;
  m.advect(o, s0, &s1, out);
  out.X = o.X + 0.5 * dt * (g0 + ob.drift(p.X, m1));
  out.t = o.t + dt;
  out.set_Y0(m.inflow_y(m1.Z0, m1.X));
  out.set_Z1(closure(out, m1));
  return out;
}

void coupled_step(const ModalObserver& ob, LatticeState& plant, LatticeState& obs,
                  const PlantClosure& plant_closure, const ObserverClosure& obs_closure) {
  const ModalTransport& m = ob.transport();
  const double dt = m.lattices().dt();
  const Measurements m0{plant.Z0(), plant.X};
  Sources sp0, so0, sp1, so1;
  m.sources(plant, plant.X, sp0);
  m.sources(obs, m0.X, so0);
  ob.inject(m0.Z0 - obs.Z0(), so0);

  LatticeState pp = plant, op = obs;
  m.advect(plant, sp0, nullptr, pp);
  m.advect(obs, so0, nullptr, op);
  const Vec3 gp0 = m.drift(plant.X, m0.Z0);
  const Vec3 go0 = ob.drift(obs.X, m0);
  pp.X = plant.X + dt * gp0;
  op.X = obs.X + dt * go0;
  pp.t = op.t = plant.t + dt;
  Measurements m1{pp.Z0(), pp.X};
  pp.set_Y0(m.inflow_y(m1.Z0, m1.X));
  op.set_Y0(m.inflow_y(m1.Z0, m1.X));
  op.set_Z1(obs_closure(op, m1));
  pp.set_Z1(plant_closure(pp, op));

  m.sources(pp, pp.X, sp1);
  m.sources(op, m1.X, so1);
  ob.inject(m1.Z0 - op.Z0(), so1);
  LatticeState pn = plant, on = obs;
  m.advect(plant, sp0, &sp1, pn);
  m.advect(obs, so0, &so1, on);
  pn.X = plant.X + 0.5 * dt * (gp0 + m.drift(pp.X, m1.Z0));
  on.X = obs.X + 0.5 * dt * (go0 + ob.drift(op.X, m1));
  pn.t = on.t = plant.t + dt;
  const Measurements m2{pn.Z0(), pn.X};
  pn.set_Y0(m.inflow_y(m2.Z0, m2.X));
  on.set_Y0(m.inflow_y(m2.Z0, m2.X));
  on.set_Z1(obs_closure(on, m2));
  pn.set_Z1(plant_closure(pn, on));
  plant = std::move(pn);
  obs = std::move(on);
}

PhysicalModalState reconstruct_estimates(const CharacteristicLattices& lat, const LatticeState& o,
                                         const Grid1D& g, const DimensionlessParams& d) {
  return to_physical(to_grid(lat, o, g), d);
}

ErrorNorms error_diagnostics(const ModalObserver& ob, const LatticeState& plant,
                             const LatticeState& obs, const DimensionlessParams& d) {
  const CharacteristicLattices& lat = ob.transport().lattices();
  const Grid1D& g = ob.grid();
  HyperbolicModalState e = to_grid(lat, plant, g);
  const HyperbolicModalState eo = to_grid(lat, obs, g);
  e.Z -= eo.Z;
  e.Y -= eo.Y;
  e.X -= eo.X;
  Field3 sigma, psi;
  ob.invert(e.Z, e.Y, sigma, psi);
  const std::vector<double> w = trapezoid_weights(g.n, g.step());
  ErrorNorms out;
  for (std::size_t a = 0; a < g.n; ++a) {
    const auto k = static_cast<Eigen::Index>(a);
    out.sigma += w[a] * sigma.col(k).squaredNorm();
    out.psi += w[a] * psi.col(k).squaredNorm();
  }
  out.sigma = std::sqrt(out.sigma);
  out.psi = std::sqrt(out.psi);
  out.X_abs = e.X.cwiseAbs();
  out.X = e.X.norm();
  out.Omega_nf = modal_norm(to_physical(e, d));
  return out;
}

}  // namespace plate
