#include <algorithm>
#include <array>

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "goursat.hpp"
#include "plate/errors.hpp"
#include "plate/kernels.hpp"

namespace plate {

namespace {

Mat3 P1f(const ModalCoefficients& c, double x) { return c.F11(x) + c.F12(x); }
Mat3 P2f(const ModalCoefficients& c, double x) { return c.F11(x) - c.F12(x); }
Mat3 Q1f(const ModalCoefficients& c, double x) { return c.F21(x) + c.F22(x); }
Mat3 Q2f(const ModalCoefficients& c, double x) { return c.F21(x) - c.F22(x); }

JumpLine observer_line(const Vec3& lam, int i, int j) {
  return JumpLine{1.0, 1.0, lam(j) / lam(i)};
}

// D-, D+, P+-, Omega and the bound certificate from solved N, M.
void finish(ObserverKernels& k, const ModalCoefficients& c, double phi_bar) {
  const auto& g = k.grid;
  const int m = g.m;
  const double d = g.delta();
  k.Dminus.assign(g.size(), Mat3::Zero());
  k.Dplus.assign(g.size(), Mat3::Zero());
  for (int b = 0; b < m; ++b) {
    const double y = g.coord(b);
    const Mat3 P2y = P2f(c, y);
    for (int a = b; a < m; ++a) {
      const double x = g.coord(a);
      const auto ab = g.index(a, b);
      Mat3 rhs = c.F15(x, y) - k.N[ab] * P2y;
      for (int s = b; s < a; ++s) {
        const double w = (s == b) ? 0.5 * d : d;
        rhs -= w * k.N[g.index(a, s)] * k.Dminus[g.index(s, b)];
      }
      if (a > b) {
        const Mat3 lhs = Mat3::Identity() + 0.5 * d * k.N[g.index(a, a)];
        k.Dminus[ab] = lhs.partialPivLu().solve(rhs);
      } else {
        k.Dminus[ab] = rhs;
      }
      Mat3 dp = c.F25(x, y) - k.M[ab] * P2y;
      for (int s = b; s <= a; ++s) {
        if (a == b) break;
        const double w = (s == b || s == a) ? 0.5 * d : d;
        dp -= w * k.M[g.index(a, s)] * k.Dminus[g.index(s, b)];
      }
      k.Dplus[ab] = dp;
    }
  }
  k.Pplus.resize(static_cast<std::size_t>(m));
  k.Pminus.resize(static_cast<std::size_t>(m));
  k.Omega.resize(static_cast<std::size_t>(m));
  const Mat3 S = c.Sigma();
  for (int a = 0; a < m; ++a) {
    k.Pplus[a] = k.M[g.index(a, 0)] * S;
    k.Pminus[a] = k.N[g.index(a, 0)] * S;
    const double x = g.coord(a);
    const Mat3 P1 = P1f(c, x);
    Mat3 om = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < i; ++j) {
        om(i, j) = (k.lambda(i) - k.lambda(j)) * k.N[g.index(a, a)](i, j) + P1(i, j);
      }
    }
    k.Omega[a] = om;
  }
  double max_abs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    max_abs = std::max({max_abs, k.N[i].cwiseAbs().maxCoeff(), k.M[i].cwiseAbs().maxCoeff()});
  }
  k.certificate = detail::make_certificate(c, phi_bar, max_abs);
}

ObserverKernels base(const ModalCoefficients& c, const Vec3& gains, const Mat3& R,
                     const KernelOptions& opt) {
  for (int i = 0; i < 3; ++i) {
    if (!(gains(i) > 0.0)) throw ConfigError("observer gains must be positive");
  }
  c.params().validate();
  ObserverKernels k;
  k.n = c.mode();
  k.grid = TriangleGrid{opt.m};
  k.lambda = Vec3(c.lambda(0), c.lambda(1), c.lambda(2));
  k.R = R;
  k.Lx = Vec3(gains(0) * k.lambda(0), gains(1) * k.lambda(1), gains(2) * k.lambda(2)).asDiagonal();
  return k;
}

}  // namespace

Mat3 observer_reflection(const DimensionlessParams& d, bool literal) {
  const double se = std::sqrt(d.eps);
  Mat3 R = -Mat3::Identity();
  if (literal) {
    const double e = std::exp(-se * d.c1bar);
    R(0, 0) = -e / (2.0 - e);
  } else {
    R(0, 0) = -std::exp(se * (d.c1bar - d.c2bar));
  }
  return R;
}

JumpLine ObserverKernels::jump_line(int i, int j) const { return observer_line(lambda, i, j); }

Mat3 ObserverKernels::N_at(double x, double y) const {
  const TriStencil base = locate(grid, x, y);
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i < j) {
        const JumpLine line = jump_line(i, j);
        out(i, j) = eval_stencil(side_stencil(grid, x, y, &line, 1), N, i, j);
      } else {
        out(i, j) = eval_stencil(base, N, i, j);
      }
    }
  }
  return out;
}

Mat3 ObserverKernels::M_at(double x, double y) const {
  const TriStencil base = locate(grid, x, y);
  Mat3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out(i, j) = eval_stencil(base, M, i, j);
  }
  return out;
}

Mat3 ObserverKernels::Pminus_at(double x) const {
  Mat3 out;
  std::vector<double> col(Pminus.size());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (std::size_t a = 0; a < col.size(); ++a) col[a] = Pminus[a](i, j);
      const double cut = i < j ? 1.0 - lambda(i) / lambda(j) : -1.0;
      out(i, j) = interp_uniform_cut(col, x, cut);
    }
  }
  return out;
}

ObserverKernels solve_observer_kernels(const ModalCoefficients& c, const Vec3& gains,
                                       const Mat3& R, const KernelOptions& opt) {
  ObserverKernels k = base(c, gains, R, opt);
  detail::GoursatSystem sys;
  sys.lambda = k.lambda;
  sys.grid = k.grid;
  sys.A1 = [&c](double y) -> Mat3 { return P1f(c, 1.0 - y).transpose(); };
  sys.B1 = [&c](double y) -> Mat3 { return P2f(c, 1.0 - y).transpose(); };
  sys.A2 = [&c](double y) -> Mat3 { return Q1f(c, 1.0 - y).transpose(); };
  sys.B2 = [&c](double y) -> Mat3 { return Q2f(c, 1.0 - y).transpose(); };
  sys.G1 = [&c](double x, double y) -> Mat3 { return -c.F14(1.0 - y, 1.0 - x).transpose(); };
  sys.G2 = [&c](double x, double y) -> Mat3 { return -c.F24(1.0 - y, 1.0 - x).transpose(); };
  sys.E1 = [&c](double s, double y) -> Mat3 { return c.F14(1.0 - y, 1.0 - s).transpose(); };
  sys.H1 = [&c](double s, double y) -> Mat3 { return c.F15(1.0 - y, 1.0 - s).transpose(); };
  sys.E2 = [&c](double s, double y) -> Mat3 { return c.F24(1.0 - y, 1.0 - s).transpose(); };
  sys.H2 = [&c](double s, double y) -> Mat3 { return c.F25(1.0 - y, 1.0 - s).transpose(); };
  sys.Rb = R;
  sys.has_phi = false;
  sys.tol = opt.tol;
  sys.max_iter = opt.max_iter;
  auto sol = detail::solve_goursat(sys);

  const auto& g = k.grid;
  const int m = g.m;
  k.N.assign(g.size(), Mat3::Zero());
  k.M.assign(g.size(), Mat3::Zero());
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b <= a; ++b) {
      const auto r = g.index(m - 1 - b, m - 1 - a);
      k.N[g.index(a, b)] = -sol.K[r].transpose();
      k.M[g.index(a, b)] = -sol.L[r].transpose();
    }
  }
  k.increments = std::move(sol.increments);
  k.iterations = sol.iterations;
  finish(k, c, sol.first_iterate_max);
  return k;
}

ObserverKernels solve_observer_kernels_direct(const ModalCoefficients& c, const Vec3& gains,
                                              const Mat3& R, const KernelOptions& opt) {
  ObserverKernels k = base(c, gains, R, opt);
  const auto& g = k.grid;
  const int m = g.m;
  const double d = g.delta();
  const Vec3& lam = k.lambda;

  std::vector<Mat3> P1(m), P2(m), Q1(m), Q2(m);
  for (int a = 0; a < m; ++a) {
    const double x = g.coord(a);
    P1[a] = P1f(c, x);
    P2[a] = P2f(c, x);
    Q1[a] = Q1f(c, x);
    Q2[a] = Q2f(c, x);
  }
  MatField F14(g.size()), F15(g.size()), F24(g.size()), F25(g.size());
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double x = g.coord(a), y = g.coord(b);
      const auto ab = g.index(a, b);
      F14[ab] = c.F14(x, y);
      F15[ab] = c.F15(x, y);
      F24[ab] = c.F24(x, y);
      F25[ab] = c.F25(x, y);
    }
  }
  detail::StencilCache cache;
  std::vector<JumpLine> nlines[3][3], mlines[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int kk = 0; kk < j; ++kk) {
        nlines[i][j].push_back(observer_line(lam, kk, j));
        mlines[i][j].push_back(observer_line(lam, kk, j));
      }
      for (int kk = j + 1; kk < 3; ++kk) {
        if (i < kk) nlines[i][j].push_back(observer_line(lam, i, kk));
      }
    }
  }

  MatField N(g.size(), Mat3::Zero()), M(g.size(), Mat3::Zero());
  std::array<std::vector<double>, 9> RN, RM;
  for (auto& v : RN) v.assign(g.size(), 0.0);
  for (auto& v : RM) v.assign(g.size(), 0.0);
  double phi_bar = 0.0, last = 0.0;
  bool converged = false;
  for (int q = 1; q <= opt.max_iter; ++q) {
    std::vector<Mat3> om(m, Mat3::Zero());
    for (int a = 0; a < m; ++a) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < i; ++j) {
          om[a](i, j) = (lam(i) - lam(j)) * N[g.index(a, a)](i, j) + P1[a](i, j);
        }
      }
    }
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b <= a; ++b) {
        const auto ab = g.index(a, b);
        Mat3 rn = -P1[a] * N[ab] - P2[a] * M[ab] + N[ab] * om[b] - F14[ab];
        Mat3 rm = Q2[a] * M[ab] + Q1[a] * N[ab] - M[ab] * om[b] + F24[ab];
        for (int s = b; s <= a && a > b; ++s) {
          const double w = (s == b || s == a) ? 0.5 * d : d;
          const auto as = g.index(a, s), sb = g.index(s, b);
          rn -= w * (F14[as] * N[sb] + F15[as] * M[sb]);
          rm += w * (F24[as] * N[sb] + F25[as] * M[sb]);
        }
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            RN[3 * i + j][ab] = rn(i, j);
            RM[3 * i + j][ab] = rm(i, j);
          }
        }
      }
    }
    // Edge traces of M on x = 1 for the N data.
    std::array<std::vector<double>, 9> Medge;
    for (int e = 0; e < 9; ++e) {
      Medge[e].resize(m);
      for (int b = 0; b < m; ++b) Medge[e][b] = M[g.index(m - 1, b)](e / 3, e % 3);
    }
    MatField Nn(g.size()), Mn(g.size());
    for (int a = 0; a < m; ++a) {
      const double x = g.coord(a);
      for (int b = 0; b <= a; ++b) {
        const double y = g.coord(b);
        const auto ab = g.index(a, b);
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            {
              const double tau = (x - y) / (lam(i) + lam(j));
              const double xq = x - lam(i) * tau, yq = y + lam(j) * tau;
              const double mq = Q1f(c, xq)(i, j) / (lam(i) + lam(j));
              Mn[ab](i, j) = mq + detail::integrate_along(g, RM[3 * i + j], mlines[i][j], xq, yq,
                                                          lam(i), -lam(j), tau, &cache);
            }
            {
              double tau, nq;
              if (i < j && observer_line(lam, i, j).upper(x, y)) {
                tau = (x - y) / (lam(j) - lam(i));
                const double xq = x + lam(i) * tau;
                nq = -P1f(c, xq)(i, j) / (lam(i) - lam(j));
              } else {
                tau = (1.0 - x) / lam(i);
                const double yq = y + lam(j) * tau;
                nq = 0.0;
                for (int kk = 0; kk < 3; ++kk) {
                  if (R(i, kk) != 0.0) nq += R(i, kk) * interp_uniform(Medge[3 * kk + j], yq);
                }
              }
              Nn[ab](i, j) = nq - detail::integrate_along(g, RN[3 * i + j], nlines[i][j], x, y,
                                                          lam(i), lam(j), tau, &cache);
            }
          }
        }
      }
    }
    double inc = 0.0, mag = 0.0;
    for (std::size_t e = 0; e < g.size(); ++e) {
      inc = std::max({inc, (Nn[e] - N[e]).cwiseAbs().maxCoeff(), (Mn[e] - M[e]).cwiseAbs().maxCoeff()});
      mag = std::max({mag, Nn[e].cwiseAbs().maxCoeff(), Mn[e].cwiseAbs().maxCoeff()});
    }
    N.swap(Nn);
    M.swap(Mn);
    if (q == 1) phi_bar = mag;
    k.increments[0].push_back(inc);
    k.iterations = q;
    last = inc;
    if (!std::isfinite(inc)) break;
    if (inc < opt.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "observer kernel iteration did not converge; last increment " << last;
    throw DivergenceError(msg.str());
  }
  k.N = std::move(N);
  k.M = std::move(M);
  finish(k, c, phi_bar);
  return k;
}

}  // namespace plate
