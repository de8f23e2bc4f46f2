#include "goursat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plate/errors.hpp"

namespace plate::detail {

namespace {

using Row = Eigen::RowVector3d;

struct Tables {
  std::vector<Mat3> A1, B1, A2, B2, F13, F23;  // at node coordinates
  MatField G1, G2;                              // at nodes (x, y)
  MatField E1, H1, E2, H2;                      // at node pairs (s, y)
};

Tables tabulate(const GoursatSystem& sys) {
  const auto& g = sys.grid;
  Tables t;
  for (int a = 0; a < g.m; ++a) {
    const double x = g.coord(a);
    t.A1.push_back(sys.A1(x));
    t.B1.push_back(sys.B1(x));
    t.A2.push_back(sys.A2(x));
    t.B2.push_back(sys.B2(x));
    if (sys.has_phi) {
      t.F13.push_back(sys.F13(x));
      t.F23.push_back(sys.F23(x));
    }
  }
  t.G1.resize(g.size());
  t.G2.resize(g.size());
  t.E1.resize(g.size());
  t.H1.resize(g.size());
  t.E2.resize(g.size());
  t.H2.resize(g.size());
  for (int a = 0; a < g.m; ++a) {
    for (int b = 0; b <= a; ++b) {
      const auto k = g.index(a, b);
      const double x = g.coord(a), y = g.coord(b);
      t.G1[k] = sys.G1(x, y);
      t.G2[k] = sys.G2(x, y);
      t.E1[k] = sys.E1(x, y);
      t.H1[k] = sys.H1(x, y);
      t.E2[k] = sys.E2(x, y);
      t.H2[k] = sys.H2(x, y);
    }
  }
  return t;
}

// Trapezoid integral of f(c) over nodes c = lo..hi with spacing d.
template <typename F>
Row trapezoid_row(int lo, int hi, double d, F&& f) {
  Row acc = Row::Zero();
  if (hi <= lo) return acc;
  for (int c = lo; c <= hi; ++c) {
    const double w = (c == lo || c == hi) ? 0.5 * d : d;
    acc += w * f(c);
  }
  return acc;
}

}  // namespace

std::size_t StencilCache::Hash::operator()(const Key& k) const {
  const std::hash<double> h;
  std::size_t v = h(k.x);
  v = v * 1000003u ^ h(k.y);
  v = v * 1000003u ^ std::hash<const void*>()(k.lines);
  return v * 1000003u ^ k.mask;
}

const NodeStencil& StencilCache::get(const TriangleGrid& g, double x, double y,
                                     const std::vector<JumpLine>& lines, double rx, double ry) {
  std::uint32_t mask = 0;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    if (lines[l].upper(rx, ry)) mask |= 1u << l;
  }
  const Key key{x, y, lines.data(), mask};
  auto it = map_.find(key);
  if (it != map_.end()) return it->second;
  return map_.emplace(key, side_stencil(g, x, y, lines.data(), lines.size(), rx, ry))
      .first->second;
}

double integrate_along(const TriangleGrid& g, const std::vector<double>& rhs,
                       const std::vector<JumpLine>& lines, double qx, double qy, double dirx,
                       double diry, double tau, StencilCache* cache) {
  if (tau <= 0.0) return 0.0;
  // Split the path where it crosses a line so each piece sees one side only.
  std::vector<double> cuts = {0.0, tau};
  for (const auto& ln : lines) {
    const double rate = diry - ln.slope * dirx;
    if (std::abs(rate) < 1e-14) continue;
    const double tc = -ln.signed_offset(qx, qy) / rate;
    if (tc > 1e-12 * tau && tc < tau * (1.0 - 1e-12)) cuts.push_back(tc);
  }
  std::sort(cuts.begin(), cuts.end());
  const double speed = std::hypot(dirx, diry);
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double t0 = cuts[p], t1 = cuts[p + 1];
    const double tm = 0.5 * (t0 + t1);
    const double rx = qx + dirx * tm, ry = qy + diry * tm;
    const double len = (t1 - t0) * speed;
    const int nseg = std::max(1, static_cast<int>(std::ceil(len / g.delta() - 1e-9)));
    const double h = (t1 - t0) / nseg;
    for (int s = 0; s <= nseg; ++s) {
      const double tt = t0 + h * s;
      const double px = qx + dirx * tt, py = qy + diry * tt;
      const double w = (s == 0 || s == nseg) ? 0.5 * h : h;
      const TriStencil st = locate(g, px, py);
      if (!cell_is_cut(st, lines.data(), lines.size(), rx, ry)) {
        acc += w * eval_stencil(st, rhs);
      } else if (cache) {
        acc += w * eval_stencil(cache->get(g, px, py, lines, rx, ry), rhs);
      } else {
        acc += w * eval_stencil(side_stencil(g, px, py, lines.data(), lines.size(), rx, ry), rhs);
      }
    }
  }
  return acc;
}

JumpLine canonical_ray(const Vec3& lambda, int i, int j) {
  return JumpLine{0.0, 0.0, lambda(j) / lambda(i)};
}

std::vector<JumpLine> rhs_lines(const Vec3& lambda, int i, int j, bool k_equation) {
  std::vector<JumpLine> out;
  for (int k = 0; k < i; ++k) out.push_back(canonical_ray(lambda, i, k));
  if (k_equation) {
    for (int p = i + 1; p < 3; ++p) {
      if (p > j) out.push_back(canonical_ray(lambda, p, j));
    }
  }
  return out;
}

GoursatSolution solve_goursat(const GoursatSystem& sys) {
  const auto& g = sys.grid;
  if (g.m < 3) throw ConfigError("kernel grid needs at least 3 points per edge");
  const int m = g.m;
  const double d = g.delta();
  const Vec3& lam = sys.lambda;
  const Tables tab = tabulate(sys);
  Mat3 SD = lam.asDiagonal() * sys.D;

  GoursatSolution sol;
  sol.K.assign(g.size(), Mat3::Zero());
  sol.L.assign(g.size(), Mat3::Zero());
  sol.Phi.assign(static_cast<std::size_t>(m), Mat3::Zero());
  sol.Omega.assign(static_cast<std::size_t>(m), Mat3::Zero());

  StencilCache cache;
  std::vector<JumpLine> klines[3][3], llines[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      klines[i][j] = rhs_lines(lam, i, j, true);
      llines[i][j] = rhs_lines(lam, i, j, false);
    }
  }

  for (int i = 2; i >= 0; --i) {
    std::vector<Row> K(g.size(), Row::Zero()), L(g.size(), Row::Zero());
    std::vector<Row> Phi(static_cast<std::size_t>(m), Row::Zero());
    std::vector<std::array<double, 3>> omega(static_cast<std::size_t>(m));
    std::array<std::vector<double>, 3> RK, RL;
    for (auto& v : RK) v.assign(g.size(), 0.0);
    for (auto& v : RL) v.assign(g.size(), 0.0);

    bool converged = false;
    double last = 0.0;
    for (int q = 1; q <= sys.max_iter; ++q) {
      // Omega row i from the current hypotenuse values.
      for (int a = 0; a < m; ++a) {
        auto& om = omega[static_cast<std::size_t>(a)];
        om = {0.0, 0.0, 0.0};
        for (int p = i + 1; p < 3; ++p) {
          om[p] = (lam(i) - lam(p)) * K[g.index(a, a)](p) + tab.A1[a](i, p);
        }
      }
      // Right-hand sides at the nodes.
      for (int a = 0; a < m; ++a) {
        const auto& om = omega[static_cast<std::size_t>(a)];
        for (int b = 0; b <= a; ++b) {
          const auto k = g.index(a, b);
          Row rk = K[k] * tab.A1[b] + L[k] * tab.B1[b] + tab.G1[k].row(i);
          Row rl = K[k] * tab.A2[b] + L[k] * tab.B2[b] + tab.G2[k].row(i);
          for (int p = i + 1; p < 3; ++p) {
            rk -= om[p] * sol.K[k].row(p);
            rl -= om[p] * sol.L[k].row(p);
          }
          rk += trapezoid_row(b, a, d, [&](int c) -> Row {
            const auto ac = g.index(a, c), cb = g.index(c, b);
            return K[ac] * tab.E1[cb] + L[ac] * tab.H1[cb];
          });
          rl += trapezoid_row(b, a, d, [&](int c) -> Row {
            const auto ac = g.index(a, c), cb = g.index(c, b);
            return K[ac] * tab.E2[cb] + L[ac] * tab.H2[cb];
          });
          for (int j = 0; j < 3; ++j) {
            RK[j][k] = rk(j);
            RL[j][k] = rl(j);
          }
        }
      }
      // Phi row i.
      std::vector<Row> PhiNew(static_cast<std::size_t>(m), Row::Zero());
      if (sys.has_phi) {
        std::vector<Row> rhs(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a) {
          const auto& om = omega[static_cast<std::size_t>(a)];
          Row r = Phi[a] * sys.A - tab.F13[a].row(i) + L[g.index(a, 0)] * SD;
          for (int p = i + 1; p < 3; ++p) r -= om[p] * sol.Phi[a].row(p);
          r += trapezoid_row(0, a, d, [&](int c) -> Row {
            const auto ac = g.index(a, c);
            return K[ac] * tab.F13[c] + L[ac] * tab.F23[c];
          });
          rhs[a] = r / lam(i);
        }
        PhiNew[0] = sys.phi0.row(i);
        for (int a = 1; a < m; ++a) PhiNew[a] = PhiNew[a - 1] + 0.5 * d * (rhs[a - 1] + rhs[a]);
      }
      // Boundary traces of the previous iterate used by the y = 0 data.
      std::array<std::vector<double>, 3> L0, Ph;
      for (int j = 0; j < 3; ++j) {
        L0[j].resize(static_cast<std::size_t>(m));
        Ph[j].resize(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a) {
          L0[j][a] = L[g.index(a, 0)](j);
          Ph[j][a] = sys.has_phi ? Phi[a](j) : 0.0;
        }
      }

      std::vector<Row> Kn(g.size()), Ln(g.size());
      for (int a = 0; a < m; ++a) {
        const double x = g.coord(a);
        for (int b = 0; b <= a; ++b) {
          const double y = g.coord(b);
          const auto k = g.index(a, b);
          for (int j = 0; j < 3; ++j) {
            // l_ij: back along (lambda_i, -lambda_j) to the hypotenuse.
            {
              const double tau = (x - y) / (lam(i) + lam(j));
              const double xq = x - lam(i) * tau, yq = y + lam(j) * tau;
              const double lq = -sys.A2(xq)(i, j) / (lam(i) + lam(j));
              Ln[k](j) = lq + integrate_along(g, RL[j], llines[i][j], xq, yq, lam(i), -lam(j), tau, &cache);
            }
            // k_ij: back along (lambda_i, lambda_j).
            {
              double tau, kq, xq, yq;
              if (i > j && canonical_ray(lam, i, j).upper(x, y)) {
                tau = (x - y) / (lam(i) - lam(j));
                xq = x - lam(i) * tau;
                yq = xq;
                kq = -sys.A1(xq)(i, j) / (lam(i) - lam(j));
              } else {
                tau = y / lam(j);
                xq = x - lam(i) * tau;
                yq = 0.0;
                double lrow[3];
                for (int c = 0; c < 3; ++c) lrow[c] = interp_uniform(L0[c], xq);
                kq = interp_uniform(Ph[j], xq);
                for (int c = 0; c < 3; ++c) kq += lrow[c] * sys.Rb(c, j);
              }
              Kn[k](j) = kq + integrate_along(g, RK[j], klines[i][j], xq, yq, lam(i), lam(j), tau, &cache);
            }
          }
        }
      }

      double inc = 0.0, mag = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        inc = std::max({inc, (Kn[k] - K[k]).cwiseAbs().maxCoeff(), (Ln[k] - L[k]).cwiseAbs().maxCoeff()});
        mag = std::max({mag, Kn[k].cwiseAbs().maxCoeff(), Ln[k].cwiseAbs().maxCoeff()});
      }
      if (sys.has_phi) {
        for (int a = 0; a < m; ++a) {
          inc = std::max(inc, (PhiNew[a] - Phi[a]).cwiseAbs().maxCoeff());
          mag = std::max(mag, PhiNew[a].cwiseAbs().maxCoeff());
        }
      }
      K.swap(Kn);
      L.swap(Ln);
      Phi.swap(PhiNew);
      sol.increments[static_cast<std::size_t>(i)].push_back(inc);
      if (q == 1) sol.first_iterate_max = std::max(sol.first_iterate_max, mag);
      sol.iterations = std::max(sol.iterations, q);
      last = inc;
      if (!std::isfinite(inc)) break;
      if (inc < sys.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "kernel iteration for row " << (i + 1) << " did not converge; last increment "
          << last;
      throw DivergenceError(msg.str());
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      sol.K[k].row(i) = K[k];
      sol.L[k].row(i) = L[k];
    }
    for (int a = 0; a < m; ++a) {
      if (sys.has_phi) sol.Phi[a].row(i) = Phi[a];
    }
  }
  for (int a = 0; a < m; ++a) {
    Mat3 om = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
      for (int p = i + 1; p < 3; ++p) {
        om(i, p) = (lam(i) - lam(p)) * sol.K[g.index(a, a)](i, p) + tab.A1[a](i, p);
      }
    }
    sol.Omega[a] = om;
  }
  return sol;
}

}  // namespace plate::detail
