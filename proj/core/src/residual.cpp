#include <algorithm>
#include <cmath>
#include <functional>

#include "goursat.hpp"
#include "plate/kernels.hpp"

namespace plate {

namespace {

constexpr double kJumpBand = 1.5;

// Residual of one entry at node (a, b): lx * f_x + ly * f_y - rhs, with f_x
// and f_y from one-sided differences whose two nodes stay on one side of
// every line. Returns false when no such stencil exists.
bool directional_residual(const TriangleGrid& g, const MatField& f, int i, int j, int a, int b,
                          double lx, double ly, double rhs, const std::vector<JumpLine>& lines,
                          double& out) {
  const double d = g.delta();
  const auto coord = [&](int p) { return g.coord(p); };
  const double x = coord(a), y = coord(b);
  // Nodes next to a jump hold one-sided reconstructions; they are left out.
  for (const auto& ln : lines) {
    const double dist = std::abs(ln.signed_offset(x, y)) / std::hypot(1.0, ln.slope);
    if (dist < kJumpBand * d) return false;
  }
  const auto same_side = [&](int a2, int b2) {
    for (const auto& ln : lines) {
      if (std::abs(ln.signed_offset(coord(a2), coord(b2))) < 1e-9) return false;
      if (ln.upper(x, y) != ln.upper(coord(a2), coord(b2))) return false;
    }
    return true;
  };
  const double f0 = f[g.index(a, b)](i, j);
  double fx = 0.0, fy = 0.0;
  bool okx = false, oky = false;
  if (a - 1 >= b && same_side(a - 1, b)) {
    fx = (f0 - f[g.index(a - 1, b)](i, j)) / d;
    okx = true;
  } else if (a + 1 < g.m && same_side(a + 1, b)) {
    fx = (f[g.index(a + 1, b)](i, j) - f0) / d;
    okx = true;
  }
  if (b - 1 >= 0 && same_side(a, b - 1)) {
    fy = (f0 - f[g.index(a, b - 1)](i, j)) / d;
    oky = true;
  } else if (b + 1 <= a && same_side(a, b + 1)) {
    fy = (f[g.index(a, b + 1)](i, j) - f0) / d;
    oky = true;
  }
  if (!okx || !oky) return false;
  out = std::abs(lx * fx + ly * fy - rhs);
  return true;
}

void scan(BlockResidual& r, const TriangleGrid& g, const MatField& f, const MatField& rhs,
          const Vec3& lam, double sign_y,
          const std::function<std::vector<JumpLine>(int, int)>& lines_of) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const auto lines = lines_of(i, j);
      for (int a = 1; a < g.m; ++a) {
        for (int b = 0; b <= a; ++b) {
          double v = 0.0;
          if (directional_residual(g, f, i, j, a, b, lam(i), sign_y * lam(j),
                                   rhs[g.index(a, b)](i, j), lines, v)) {
            r.pde = std::max(r.pde, v);
            ++r.checked;
          } else {
            ++r.skipped;
          }
        }
      }
    }
  }
}

Mat3 P1f(const ModalCoefficients& c, double x) { return c.F11(x) + c.F12(x); }
Mat3 P2f(const ModalCoefficients& c, double x) { return c.F11(x) - c.F12(x); }
Mat3 Q1f(const ModalCoefficients& c, double x) { return c.F21(x) + c.F22(x); }
Mat3 Q2f(const ModalCoefficients& c, double x) { return c.F21(x) - c.F22(x); }

}  // namespace

double ResidualReport::max_pde() const {
  double out = 0.0;
  for (const auto& b : blocks) out = std::max(out, b.pde);
  return out;
}

double ResidualReport::max_boundary() const {
  double out = 0.0;
  for (const auto& b : blocks) out = std::max(out, b.boundary);
  return out;
}

ResidualReport kernel_residual(const ControllerKernels& k, const ModalCoefficients& c) {
  const auto& g = k.grid;
  const int m = g.m;
  const double d = g.delta();
  const Vec3& lam = k.lambda;
  const Mat3 S = c.Sigma();
  const Mat3 Rb = S * c.C() * c.SigmaInv();

  MatField RK(g.size()), RL(g.size());
  for (int a = 0; a < m; ++a) {
    const double x = g.coord(a);
    for (int b = 0; b <= a; ++b) {
      const double y = g.coord(b);
      const auto ab = g.index(a, b);
      const Mat3& K = k.K[ab];
      const Mat3& L = k.L[ab];
      Mat3 rk = K * P1f(c, y) + L * Q1f(c, y) - k.Omega[a] * K - c.F14(x, y);
      Mat3 rl = K * P2f(c, y) + L * Q2f(c, y) - k.Omega[a] * L - c.F15(x, y);
      for (int s = b; s <= a && a > b; ++s) {
        const double w = (s == b || s == a) ? 0.5 * d : d;
        const double sv = g.coord(s);
        const auto as = g.index(a, s);
        rk += w * (k.K[as] * c.F14(sv, y) + k.L[as] * c.F24(sv, y));
        rl += w * (k.K[as] * c.F15(sv, y) + k.L[as] * c.F25(sv, y));
      }
      RK[ab] = rk;
      RL[ab] = rl;
    }
  }

  ResidualReport rep;
  BlockResidual bk{"K"}, bl{"L"}, bp{"Phi"};
  scan(bk, g, k.K, RK, lam, 1.0, [&](int i, int j) {
    auto lines = detail::rhs_lines(lam, i, j, true);
    if (i > j) lines.push_back(k.jump_line(i, j));
    return lines;
  });
  scan(bl, g, k.L, RL, lam, -1.0,
       [&](int i, int j) { return detail::rhs_lines(lam, i, j, false); });

  for (int a = 0; a < m; ++a) {
    const double x = g.coord(a);
    const Mat3 P1 = P1f(c, x), P2 = P2f(c, x);
    const Mat3 Kd = k.K[g.index(a, a)], Ld = k.L[g.index(a, a)];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        bl.boundary = std::max(bl.boundary, std::abs((lam(i) + lam(j)) * Ld(i, j) + P2(i, j)));
        if (i > j) {
          bk.boundary = std::max(bk.boundary, std::abs((lam(i) - lam(j)) * Kd(i, j) + P1(i, j)));
        }
      }
    }
    const auto a0 = g.index(a, 0);
    // At the origin the lower entries take the hypotenuse value instead.
    const Mat3 gap = k.K[a0] - k.L[a0] * Rb - k.Phi[a];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (a == 0 && i > j) continue;
        bk.boundary = std::max(bk.boundary, std::abs(gap(i, j)));
      }
    }
  }

  // Phi' = Sigma^-1 [Phi A - F13 - Omega Phi + L(x,0) Sigma D + int_0^x (K F13 + L F23)].
  const Mat3 SD = S * c.D();
  std::vector<Mat3> rphi(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const double x = g.coord(a);
    Mat3 r = k.Phi[a] * c.A() - c.F13(x) - k.Omega[a] * k.Phi[a] + k.L[g.index(a, 0)] * SD;
    for (int s = 0; s <= a && a > 0; ++s) {
      const double w = (s == 0 || s == a) ? 0.5 * d : d;
      const double sv = g.coord(s);
      r += w * (k.K[g.index(a, s)] * c.F13(sv) + k.L[g.index(a, s)] * c.F23(sv));
    }
    rphi[a] = c.SigmaInv() * r;
  }
  for (int a = 1; a < m; ++a) {
    const Mat3 dphi = (k.Phi[a] - k.Phi[a - 1]) / d;
    bp.pde = std::max(bp.pde, (dphi - rphi[a]).cwiseAbs().maxCoeff());
    ++bp.checked;
  }
  rep.blocks = {bk, bl, bp};
  return rep;
}

ResidualReport kernel_residual(const ObserverKernels& k, const ModalCoefficients& c) {
  const auto& g = k.grid;
  const int m = g.m;
  const double d = g.delta();
  const Vec3& lam = k.lambda;

  MatField RN(g.size()), RM(g.size());
  for (int a = 0; a < m; ++a) {
    const double x = g.coord(a);
    const Mat3 P1 = P1f(c, x), P2 = P2f(c, x), Q1 = Q1f(c, x), Q2 = Q2f(c, x);
    for (int b = 0; b <= a; ++b) {
      const double y = g.coord(b);
      const auto ab = g.index(a, b);
      const Mat3& N = k.N[ab];
      const Mat3& M = k.M[ab];
      Mat3 rn = -P1 * N - P2 * M + N * k.Omega[b] - c.F14(x, y);
      Mat3 rm = Q2 * M + Q1 * N - M * k.Omega[b] + c.F24(x, y);
      for (int s = b; s <= a && a > b; ++s) {
        const double w = (s == b || s == a) ? 0.5 * d : d;
        const double sv = g.coord(s);
        const auto sb = g.index(s, b);
        rn -= w * (c.F14(x, sv) * k.N[sb] + c.F15(x, sv) * k.M[sb]);
        rm += w * (c.F24(x, sv) * k.N[sb] + c.F25(x, sv) * k.M[sb]);
      }
      RN[ab] = rn;
      RM[ab] = rm;
    }
  }

  const auto line = [&](int i, int j) { return k.jump_line(i, j); };
  ResidualReport rep;
  BlockResidual bn{"N"}, bm{"M"};
  scan(bn, g, k.N, RN, lam, 1.0, [&](int i, int j) {
    std::vector<JumpLine> out;
    for (int p = 0; p < j; ++p) out.push_back(line(p, j));
    for (int p = j + 1; p < 3; ++p) {
      if (i < p) out.push_back(line(i, p));
    }
    if (i < j) out.push_back(line(i, j));
    return out;
  });
  scan(bm, g, k.M, RM, lam, -1.0, [&](int, int j) {
    std::vector<JumpLine> out;
    for (int p = 0; p < j; ++p) out.push_back(line(p, j));
    return out;
  });

  for (int a = 0; a < m; ++a) {
    const double x = g.coord(a);
    const Mat3 P1 = P1f(c, x), Q1 = Q1f(c, x);
    const Mat3 Nd = k.N[g.index(a, a)], Md = k.M[g.index(a, a)];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        bm.boundary = std::max(bm.boundary, std::abs((lam(i) + lam(j)) * Md(i, j) - Q1(i, j)));
        if (i < j) {
          bn.boundary = std::max(bn.boundary, std::abs((lam(i) - lam(j)) * Nd(i, j) + P1(i, j)));
        }
      }
    }
  }
  for (int b = 0; b + 1 < m; ++b) {
    const auto e = g.index(m - 1, b);
    bn.boundary = std::max(bn.boundary, (k.N[e] - k.R * k.M[e]).cwiseAbs().maxCoeff());
  }
  rep.blocks = {bn, bm};
  return rep;
}

}  // namespace plate
