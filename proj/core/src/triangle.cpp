#include "plate/triangle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace plate {

TriStencil locate(const TriangleGrid& g, double x, double y) {
  const double d = g.delta();
  x = std::clamp(x, 0.0, 1.0);
  y = std::clamp(y, 0.0, x);
  int a = std::min(static_cast<int>(std::floor(x / d)), g.m - 2);
  int b = std::min(static_cast<int>(std::floor(y / d)), a);
  a = std::max(a, 0);
  b = std::max(b, 0);
  const double fx = std::clamp(x / d - a, 0.0, 1.0);
  double fy = std::clamp(y / d - b, 0.0, 1.0);
  TriStencil s;
  s.x = x;
  s.y = y;
  if (b == a) fy = std::min(fy, fx);
  if (fy <= fx) {
    s.idx = {g.index(a, b), g.index(a + 1, b), g.index(a + 1, b + 1)};
    s.w = {1.0 - fx, fx - fy, fy};
    s.vx = {a * d, (a + 1) * d, (a + 1) * d};
    s.vy = {b * d, b * d, (b + 1) * d};
  } else {
    s.idx = {g.index(a, b), g.index(a + 1, b + 1), g.index(a, b + 1)};
    s.w = {1.0 - fy, fx, fy - fx};
    s.vx = {a * d, (a + 1) * d, a * d};
    s.vy = {b * d, (b + 1) * d, (b + 1) * d};
  }
  return s;
}

bool cell_is_cut(const TriStencil& s, const JumpLine* lines, std::size_t n_lines, double rx,
                 double ry) {
  for (std::size_t l = 0; l < n_lines; ++l) {
    const bool q = lines[l].upper(rx, ry);
    for (int v = 0; v < 3; ++v) {
      if (s.w[v] != 0.0 && lines[l].upper(s.vx[v], s.vy[v]) != q) return true;
    }
  }
  return false;
}

NodeStencil side_stencil(const TriangleGrid& g, double x, double y, const JumpLine* lines,
                         std::size_t n_lines, double rx, double ry) {
  const TriStencil base = locate(g, x, y);
  NodeStencil out;
  if (!cell_is_cut(base, lines, n_lines, rx, ry)) {
    for (int v = 0; v < 3; ++v) {
      out.idx.push_back(base.idx[v]);
      out.w.push_back(base.w[v]);
    }
    return out;
  }
  const double d = g.delta();
  const int a0 = static_cast<int>(std::floor(base.x / d));
  const int b0 = static_cast<int>(std::floor(base.y / d));
  const auto same_side = [&](double px, double py) {
    for (std::size_t l = 0; l < n_lines; ++l) {
      if (std::abs(lines[l].signed_offset(px, py)) < 1e-9) return false;
      if (lines[l].upper(px, py) != lines[l].upper(rx, ry)) return false;
    }
    return true;
  };
  for (int R = 1; R < g.m; ++R) {
    std::vector<std::size_t> idx;
    std::vector<double> dx, dy;
    for (int a = std::max(0, a0 - R + 1); a <= std::min(g.m - 1, a0 + R); ++a) {
      for (int b = std::max(0, b0 - R + 1); b <= std::min(a, b0 + R); ++b) {
        const double px = g.coord(a), py = g.coord(b);
        if (!same_side(px, py)) continue;
        idx.push_back(g.index(a, b));
        dx.push_back((px - base.x) / d);
        dy.push_back((py - base.y) / d);
      }
    }
    if (idx.size() < 3) continue;
    Mat3 AtA = Mat3::Zero();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Vec3 r(1.0, dx[k], dy[k]);
      AtA += r * r.transpose();
    }
    // Needs a well-spread set, not just enough points.
    Eigen::SelfAdjointEigenSolver<Mat3> es(AtA);
    if (es.eigenvalues()(0) < 0.05 * static_cast<double>(idx.size())) continue;
    const Vec3 c = AtA.ldlt().solve(Vec3(1.0, 0.0, 0.0));
    out.idx = idx;
    out.w.resize(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out.w[k] = c(0) + c(1) * dx[k] + c(2) * dy[k];
    return out;
  }
  for (int v = 0; v < 3; ++v) {
    out.idx.push_back(base.idx[v]);
    out.w.push_back(base.w[v]);
  }
  return out;
}

double interp_uniform(const std::vector<double>& f, double x) {
  const auto n = static_cast<int>(f.size());
  if (n == 1) return f[0];
  const double h = 1.0 / (n - 1);
  x = std::clamp(x, 0.0, 1.0);
  const int k = std::min(static_cast<int>(std::floor(x / h)), n - 2);
  const double t = x / h - k;
  return (1.0 - t) * f[k] + t * f[k + 1];
}

Mat3 interp_uniform(const std::vector<Mat3>& f, double x) {
  const auto n = static_cast<int>(f.size());
  if (n == 1) return f[0];
  const double h = 1.0 / (n - 1);
  x = std::clamp(x, 0.0, 1.0);
  const int k = std::min(static_cast<int>(std::floor(x / h)), n - 2);
  const double t = x / h - k;
  return (1.0 - t) * f[k] + t * f[k + 1];
}

double interp_uniform_cut(const std::vector<double>& f, double x, double cut) {
  const auto n = static_cast<int>(f.size());
  if (n < 2) return f[0];
  const double h = 1.0 / (n - 1);
  x = std::clamp(x, 0.0, 1.0);
  const int k = std::min(static_cast<int>(std::floor(x / h)), n - 2);
  const double xk = k * h, xk1 = (k + 1) * h;
  const double t = x / h - k;
  if (!(cut > xk && cut < xk1)) return (1.0 - t) * f[k] + t * f[k + 1];
  if (x < cut) {
    if (k >= 1) return f[k] + (f[k] - f[k - 1]) * t;
    return f[k];
  }
  if (k + 2 < n) return f[k + 1] - (f[k + 2] - f[k + 1]) * (1.0 - t);
  return f[k + 1];
}

}  // namespace plate
