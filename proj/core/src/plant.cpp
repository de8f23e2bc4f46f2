#include "plate/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

namespace plate {

namespace {

constexpr double kSnap = 1e-12;

using BlockFn = Mat3 (ModalCoefficients::*)(double, double) const;

// Factor f(x, y) = a(x) b(y) through a reference point with large |f|.
bool separable(const std::function<double(double, double)>& f, double& x0, double& y0,
               double& ref) {
  ref = 0.0;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) {
      const double x = 0.25 * i, y = 0.25 * j;
      if (std::abs(f(x, y)) > std::abs(ref)) {
        ref = f(x, y);
        x0 = x;
        y0 = y;
      }
    }
  }
  if (ref == 0.0) return true;
  for (int i = 0; i <= 8; ++i) {
    for (int j = 0; j <= 8; ++j) {
      const double x = 0.125 * i, y = 0.125 * j;
      const double prod = f(x, y0) * f(x0, y) / ref;
      if (std::abs(prod - f(x, y)) > 1e-12 * std::abs(ref)) return false;
    }
  }
  return true;
}

}  // namespace

CharacteristicLattices::CharacteristicLattices(const Vec3& lambda, double dt)
    : lambda_(lambda), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  for (int i = 0; i < 3; ++i) {
    const double h = lambda(i) * dt;
    const auto K = static_cast<long>(std::floor(1.0 / h + 1e-9));
    const bool closed = std::abs(1.0 - static_cast<double>(K) * h) <= 1e-9;
    std::vector<double>& z = x_[i];
    std::vector<double>& y = x_[i + 3];
    if (!closed) z.push_back(0.0);
    for (long k = K; k >= 0; --k) z.push_back(k == K && closed ? 0.0 : 1.0 - static_cast<double>(k) * h);
    for (long k = 0; k <= K; ++k) y.push_back(k == K && closed ? 1.0 : static_cast<double>(k) * h);
    if (!closed) y.push_back(1.0);
  }
  for (int c = 0; c < kLatticeComponents; ++c) {
    const std::vector<double>& xs = x_[c];
    const auto n = static_cast<Eigen::Index>(xs.size());
    trap_[c] = Eigen::VectorXd::Zero(n);
    for (Eigen::Index q = 0; q + 1 < n; ++q) {
      const double h = xs[static_cast<std::size_t>(q + 1)] - xs[static_cast<std::size_t>(q)];
      trap_[c](q) += 0.5 * h;
      trap_[c](q + 1) += 0.5 * h;
    }
    const double h = lambda(c % 3) * dt;
    std::vector<double> feet(xs.size());
    for (std::size_t q = 0; q < xs.size(); ++q) {
      feet[q] = c < 3 ? std::min(1.0, xs[q] + h) : std::max(0.0, xs[q] - h);
    }
    foot_[c] = table(c, feet);
    const std::size_t in = inflow(c);
    foot_[c].lo[in] = static_cast<std::uint32_t>(in);
    foot_[c].w[in] = 0.0;
  }
  for (int src = 0; src < kLatticeComponents; ++src) {
    for (int dst = 0; dst < kLatticeComponents; ++dst) {
      if (src != dst) cross_[src][dst] = table(src, x_[dst]);
    }
  }
}

void CharacteristicLattices::bracket(int c, double x, std::size_t& lo, double& w) const {
  const std::vector<double>& xs = x_[c];
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  k = std::min(k, xs.size() - 2);
  w = std::clamp((x - xs[k]) / (xs[k + 1] - xs[k]), 0.0, 1.0);
  if (w < kSnap) {
    w = 0.0;
  } else if (w > 1.0 - kSnap) {
    ++k;
    w = 0.0;
  }
  lo = k;
}

CharacteristicLattices::Interp CharacteristicLattices::table(int c,
                                                             const std::vector<double>& at) const {
  Interp t;
  t.lo.resize(at.size());
  t.w.resize(at.size());
  for (std::size_t q = 0; q < at.size(); ++q) {
    std::size_t lo = 0;
    double w = 0.0;
    bracket(c, at[q], lo, w);
    t.lo[q] = static_cast<std::uint32_t>(lo);
    t.w[q] = w;
  }
  return t;
}

void CharacteristicLattices::resample(int src, const Eigen::VectorXd& f, int dst,
                                      Eigen::VectorXd& out) const {
  if (src == dst) {
    out = f;
    return;
  }
  const Interp& t = cross_[src][dst];
  const std::size_t n = t.lo.size();
  out.resize(static_cast<Eigen::Index>(n));
  for (std::size_t q = 0; q < n; ++q) {
    const auto lo = t.lo[q];
    const double w = t.w[q];
    out(static_cast<Eigen::Index>(q)) = w == 0.0 ? f(lo) : (1.0 - w) * f(lo) + w * f(lo + 1);
  }
}

double CharacteristicLattices::value_at(int c, const Eigen::VectorXd& f, double x) const {
  std::size_t lo = 0;
  double w = 0.0;
  bracket(c, x, lo, w);
  const auto k = static_cast<Eigen::Index>(lo);
  return w == 0.0 ? f(k) : (1.0 - w) * f(k) + w * f(k + 1);
}

LatticeState LatticeState::zeros(const CharacteristicLattices& lat, double t) {
  LatticeState s;
  for (int c = 0; c < kLatticeComponents; ++c) {
    s.f[c] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lat.size(c)));
  }
  s.t = t;
  return s;
}

LatticeState LatticeState::sample(const CharacteristicLattices& lat,
                                  const std::function<double(int, double)>& field, const Vec3& X,
                                  double t) {
  LatticeState s = zeros(lat, t);
  for (int c = 0; c < kLatticeComponents; ++c) {
    const std::vector<double>& xs = lat.x(c);
    for (std::size_t q = 0; q < xs.size(); ++q) s.f[c](static_cast<Eigen::Index>(q)) = field(c, xs[q]);
  }
  s.X = X;
  return s;
}

Vec3 LatticeState::Z1() const {
  return Vec3(f[0](f[0].size() - 1), f[1](f[1].size() - 1), f[2](f[2].size() - 1));
}

Vec3 LatticeState::Y1() const {
  return Vec3(f[3](f[3].size() - 1), f[4](f[4].size() - 1), f[5](f[5].size() - 1));
}

void LatticeState::set_Z1(const Vec3& z) {
  for (int i = 0; i < 3; ++i) f[i](f[i].size() - 1) = z(i);
}

void LatticeState::set_Y0(const Vec3& y) {
  for (int i = 0; i < 3; ++i) f[i + 3](0) = y(i);
}

HyperbolicModalState to_grid(const CharacteristicLattices& lat, const LatticeState& s,
                             const Grid1D& g) {
  HyperbolicModalState h = HyperbolicModalState::zeros(g, s.t);
  for (std::size_t a = 0; a < g.n; ++a) {
    const double x = g.at(a);
    const auto k = static_cast<Eigen::Index>(a);
    for (int i = 0; i < 3; ++i) {
      h.Z(i, k) = lat.value_at(i, s.f[i], x);
      h.Y(i, k) = lat.value_at(i + 3, s.f[i + 3], x);
    }
  }
  h.X = s.X;
  return h;
}

ModalTransport::ModalTransport(const ModalCoefficients& c,
                               std::shared_ptr<const CharacteristicLattices> lat)
    : coef_(c), lat_(std::move(lat)) {
  const CharacteristicLattices& L = *lat_;
  for (int t = 0; t < kLatticeComponents; ++t) {
    const int i = t % 3;
    const bool z = t < 3;
    const std::vector<double>& xs = L.x(t);
    const auto n = static_cast<Eigen::Index>(xs.size());
    std::array<Eigen::VectorXd, kLatticeComponents> loc;
    for (auto& v : loc) v = Eigen::VectorXd::Zero(n);
    for (auto& v : xcoef_[t]) v = Eigen::VectorXd::Zero(n);
    for (Eigen::Index q = 0; q < n; ++q) {
      const double x = xs[static_cast<std::size_t>(q)];
      const Mat3 a = z ? c.F11(x) : c.F21(x);
      const Mat3 b = z ? c.F12(x) : c.F22(x);
      const Mat3 f3 = z ? c.F13(x) : c.F23(x);
      for (int j = 0; j < 3; ++j) {
        loc[j](q) = a(i, j) + b(i, j);
        loc[j + 3](q) = a(i, j) - b(i, j);
        xcoef_[t][j](q) = f3(i, j);
      }
    }
    for (int s = 0; s < kLatticeComponents; ++s) {
      if (loc[s].cwiseAbs().maxCoeff() > 0.0) local_[t].push_back({s, loc[s]});
    }

    const std::array<BlockFn, 2> blocks = z ? std::array<BlockFn, 2>{&ModalCoefficients::F14,
                                                                     &ModalCoefficients::F15}
                                            : std::array<BlockFn, 2>{&ModalCoefficients::F24,
                                                                     &ModalCoefficients::F25};
    for (int blk = 0; blk < 2; ++blk) {
      for (int j = 0; j < 3; ++j) {
        const BlockFn fn = blocks[blk];
        const std::function<double(double, double)> entry = [&c, fn, i, j](double x, double y) {
          return (c.*fn)(x, y)(i, j);
        };
        double x0 = 0.0, y0 = 0.0, ref = 0.0;
        if (!separable(entry, x0, y0, ref)) {
          throw std::logic_error("integral coupling entry is not separable");
        }
        if (ref == 0.0) continue;
        const int src = blk * 3 + j;
        Integral in;
        in.src = src;
        in.a.resize(n);
        for (Eigen::Index q = 0; q < n; ++q) in.a(q) = entry(xs[static_cast<std::size_t>(q)], y0);
        const std::vector<double>& ys = L.x(src);
        in.b.resize(static_cast<Eigen::Index>(ys.size()));
        for (std::size_t q = 0; q < ys.size(); ++q) {
          in.b(static_cast<Eigen::Index>(q)) = entry(x0, ys[q]) / ref;
        }
        integral_[t].push_back(std::move(in));
      }
    }
  }
}

void ModalTransport::sources(const LatticeState& s, const Vec3& X, Sources& out) const {
  const CharacteristicLattices& L = *lat_;
  Eigen::VectorXd buf, cum;
  for (int t = 0; t < kLatticeComponents; ++t) {
    Eigen::VectorXd& o = out[t];
    o = xcoef_[t][0] * X(0) + xcoef_[t][1] * X(1) + xcoef_[t][2] * X(2);
    for (const Local& l : local_[t]) {
      L.resample(l.src, s.f[l.src], t, buf);
      o += l.coef.cwiseProduct(buf);
    }
    for (const Integral& in : integral_[t]) {
      const std::vector<double>& ys = L.x(in.src);
      const Eigen::VectorXd& f = s.f[in.src];
      cum.resize(f.size());
      cum(0) = 0.0;
      double prev = in.b(0) * f(0);
      for (Eigen::Index q = 1; q < f.size(); ++q) {
        const double cur = in.b(q) * f(q);
        const double h = ys[static_cast<std::size_t>(q)] - ys[static_cast<std::size_t>(q - 1)];
        cum(q) = cum(q - 1) + 0.5 * h * (prev + cur);
        prev = cur;
      }
      L.resample(in.src, cum, t, buf);
      o += in.a.cwiseProduct(buf);
    }
  }
}

void ModalTransport::advect(const LatticeState& old, const Sources& s0, const Sources* s1,
                            LatticeState& out) const {
  const CharacteristicLattices& L = *lat_;
  const double dt = L.dt();
  for (int c = 0; c < kLatticeComponents; ++c) {
    const std::size_t n = L.size(c);
    const std::size_t in = L.inflow(c);
    out.f[c].resize(static_cast<Eigen::Index>(n));
    for (std::size_t q = 0; q < n; ++q) {
      if (q == in) continue;
      const double base = L.foot(c, old.f[c], q);
      const double src0 = L.foot(c, s0[c], q);
      const auto k = static_cast<Eigen::Index>(q);
      out.f[c](k) = s1 ? base + 0.5 * dt * (src0 + (*s1)[c](k)) : base + dt * src0;
    }
  }
}

double ModalTransport::alpha_end(const LatticeState& s) const {
  const CharacteristicLattices& L = *lat_;
  return s.X(1) + 0.5 * (L.weights(1).dot(s.f[1]) + L.weights(4).dot(s.f[4]));
}

InflowClosure free_end_closure(const ModalTransport& m) {
  const DimensionlessParams& d = m.coefficients().params();
  const double k = m.coefficients().wavenumber();
  const double g1 = std::sqrt(d.eps) * d.c1bar, g2 = std::sqrt(d.eps) * d.c2bar;
  return [&m, k, g1, g2](const LatticeState& s) {
    const Vec3 y1 = s.Y1();
    const double r1 = -y1(1);
    const Eigen::VectorXd& wr = m.lattices().weights(1);
    const double alpha = m.alpha_end(s) + 0.5 * wr(wr.size() - 1) * (r1 - s.f[1](s.f[1].size() - 1));
    return Vec3(2.0 * std::exp(g1) * alpha - std::exp(g1 - g2) * y1(0), r1,
                -2.0 * k * alpha - y1(2));
  };
}

LatticeQuadrature::LatticeQuadrature(const CharacteristicLattices& lat, double x,
                                     const KernelRow& kernel) {
  Mat3 K, L, Kx, Lx;
  const bool edge = x >= 1.0 - 1e-14;
  for (int c = 0; c < kLatticeComponents; ++c) {
    const std::vector<double>& ys = lat.x(c);
    const int j = c % 3;
    const bool z = c < 3;
    for (int i = 0; i < 3; ++i) w_[i][c] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ys.size()));
    std::size_t p = 0;
    while (p + 1 < ys.size() && ys[p + 1] <= x + 1e-14) ++p;
    std::vector<Vec3> kv(p + 1);
    for (std::size_t q = 0; q <= p; ++q) {
      kernel(x, ys[q], K, L);
      kv[q] = z ? Vec3(K.col(j)) : Vec3(L.col(j));
    }
    for (std::size_t q = 0; q < p; ++q) {
      const double h = ys[q + 1] - ys[q];
      for (int i = 0; i < 3; ++i) {
        w_[i][c](static_cast<Eigen::Index>(q)) += 0.5 * h * kv[q](i);
        w_[i][c](static_cast<Eigen::Index>(q + 1)) += 0.5 * h * kv[q + 1](i);
      }
    }
    if (!edge && p + 1 < ys.size() && x > ys[p] + 1e-14) {
      const double h = x - ys[p];
      const double th = h / (ys[p + 1] - ys[p]);
      kernel(x, x, Kx, Lx);
      const Vec3 kxx = z ? Vec3(Kx.col(j)) : Vec3(Lx.col(j));
      for (int i = 0; i < 3; ++i) {
        w_[i][c](static_cast<Eigen::Index>(p)) += 0.5 * h * (kv[p](i) + (1.0 - th) * kxx(i));
        w_[i][c](static_cast<Eigen::Index>(p + 1)) += 0.5 * h * th * kxx(i);
      }
    }
    if (edge && z) {
      for (int i = 0; i < 3; ++i) end_(i, j) = w_[i][c](w_[i][c].size() - 1);
    }
  }
}

Vec3 LatticeQuadrature::apply(const LatticeState& s) const {
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int c = 0; c < kLatticeComponents; ++c) out(i) += w_[i][c].dot(s.f[c]);
  }
  return out;
}

LatticeLaw::LatticeLaw(const ControllerKernels& k, const CharacteristicLattices& lat,
                       const Grid1D& g)
    : grid_(g) {
  const LatticeQuadrature::KernelRow row = [&k](double x, double y, Mat3& K, Mat3& L) {
    if (x >= 1.0 - 1e-14) {
      K = k.K_edge(y);
      L = k.L_edge(y);
    } else {
      K = k.K_at(x, y);
      L = k.L_at(x, y);
    }
  };
  for (std::size_t a = 0; a < g.n; ++a) {
    const double x = a + 1 == g.n ? 1.0 : g.at(a);
    rows_.emplace_back(lat, x, row);
    phi_.push_back(k.Phi_at(x));
  }
  solve_ = (Mat3::Identity() - rows_.back().end_weights()).inverse();
  d0_ = k.K_edge(0.0) + k.L_edge(0.0) - phi_.back();
}

Vec3 LatticeLaw::solve_inflow(const LatticeState& s, const Vec3& extra) const {
  const LatticeQuadrature& q = rows_.back();
  const Vec3 rest = q.apply(s) - q.end_weights() * s.Z1() + phi_.back() * s.X + extra;
  return solve_ * rest;
}

Field3 LatticeLaw::target(const CharacteristicLattices& lat, const LatticeState& s) const {
  Field3 sigma(3, static_cast<Eigen::Index>(grid_.n));
  for (std::size_t a = 0; a < grid_.n; ++a) {
    const double x = a + 1 == grid_.n ? 1.0 : grid_.at(a);
    Vec3 z;
    for (int i = 0; i < 3; ++i) z(i) = lat.value_at(i, s.f[i], x);
    sigma.col(static_cast<Eigen::Index>(a)) = z - rows_[a].apply(s) - phi_[a] * s.X;
  }
  return sigma;
}

std::array<Eigen::VectorXd, 3> LatticeLaw::target_on_lattice(const CharacteristicLattices& lat,
                                                              const LatticeState& s) const {
  const std::size_t nx = grid_.n;
  Field3 g(3, static_cast<Eigen::Index>(nx));
  for (std::size_t a = 0; a < nx; ++a) {
    g.col(static_cast<Eigen::Index>(a)) = rows_[a].apply(s) + phi_[a] * s.X;
  }
  const double h = grid_.step();
  std::array<Eigen::VectorXd, 3> out;
  for (int i = 0; i < 3; ++i) {
    const std::vector<double>& xs = lat.x(i);
    out[i].resize(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const double u = std::clamp(xs[q] / h, 0.0, static_cast<double>(nx - 1));
      const auto lo = std::min(static_cast<std::size_t>(u), nx - 2);
      const double w = u - static_cast<double>(lo);
      const double gi = (1.0 - w) * g(i, static_cast<Eigen::Index>(lo)) +
                        w * g(i, static_cast<Eigen::Index>(lo + 1));
      out[i](static_cast<Eigen::Index>(q)) = s.f[i](static_cast<Eigen::Index>(q)) - gi;
    }
  }
  return out;
}

LatticeState plant_step(const ModalTransport& m, const LatticeState& s,
                        const InflowClosure& closure) {
  const double dt = m.lattices().dt();
  Sources s0, s1;
  m.sources(s, s.X, s0);
  LatticeState p = s;
  m.advect(s, s0, nullptr, p);
  const Vec3 g0 = m.drift(s.X, s.Z0());
  p.X = s.X + dt * g0;
  p.t = s.t + dt;
  p.set_Y0(m.inflow_y(p.Z0(), p.X));
  p.set_Z1(closure(p));

  m.sources(p, p.X, s1);
  LatticeState out = s;
  m.advect(s, s0, &s1, out);
  out.X = s.X + 0.5 * dt * (g0 + m.drift(p.X, p.Z0()));
  out.t = s.t + dt;
  out.set_Y0(m.inflow_y(out.Z0(), out.X));
  out.set_Z1(closure(out));
  return out;
}

}  // namespace plate
