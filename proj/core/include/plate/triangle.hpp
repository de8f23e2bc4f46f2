#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "plate/types.hpp"

namespace plate {

/// Uniform nodes of the triangle 0 <= y <= x <= 1 with m points per edge.
/// Node (a, b) sits at (a*delta, b*delta) with 0 <= b <= a < m.
struct TriangleGrid {
  int m = 41;

  double delta() const { return 1.0 / static_cast<double>(m - 1); }
  std::size_t size() const { return static_cast<std::size_t>(m) * (m + 1) / 2; }
  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * (a + 1) / 2 + static_cast<std::size_t>(b);
  }
  double coord(int a) const { return a == m - 1 ? 1.0 : a * delta(); }

  friend bool operator==(const TriangleGrid&, const TriangleGrid&) = default;
};

/// One 3x3 matrix per triangle node.
using MatField = std::vector<Mat3>;

/// Straight line through (x0, y0). A point is on the upper side when
/// (y - y0) - slope (x - x0) >= 0, up to a roundoff allowance.
struct JumpLine {
  double x0 = 0.0, y0 = 0.0, slope = 0.0;

  double signed_offset(double x, double y) const { return (y - y0) - slope * (x - x0); }
  bool upper(double x, double y) const { return signed_offset(x, y) >= -1e-12; }
};

/// Linear interpolation data for a point inside the triangle.
struct TriStencil {
  std::array<std::size_t, 3> idx{};
  std::array<double, 3> w{};
  std::array<double, 3> vx{}, vy{};
  double x = 0.0, y = 0.0;
};

/// Locates (x, y) (clamped into the triangle) in the split cell grid. Cells
/// are cut along the direction (1, 1), so the diagonal cells are exactly the
/// half cells along y = x.
TriStencil locate(const TriangleGrid& g, double x, double y);

/// Interpolation weights over a variable set of nodes.
struct NodeStencil {
  std::vector<std::size_t> idx;
  std::vector<double> w;
};

/// True when a line separates a vertex with nonzero weight from (rx, ry).
bool cell_is_cut(const TriStencil& s, const JumpLine* lines, std::size_t n_lines, double rx,
                 double ry);

/// Linear reconstruction at (x, y) that only uses nodes on the same side of
/// every line as the reference point (rx, ry). Plain cell interpolation when
/// no line cuts the cell; otherwise a least-squares linear fit over the
/// nearest same-side nodes.
NodeStencil side_stencil(const TriangleGrid& g, double x, double y, const JumpLine* lines,
                         std::size_t n_lines, double rx, double ry);
inline NodeStencil side_stencil(const TriangleGrid& g, double x, double y,
                                const JumpLine* lines, std::size_t n_lines) {
  return side_stencil(g, x, y, lines, n_lines, x, y);
}

inline double eval_stencil(const NodeStencil& s, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.idx.size(); ++k) acc += s.w[k] * f[s.idx[k]];
  return acc;
}

inline double eval_stencil(const NodeStencil& s, const MatField& f, int i, int j) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.idx.size(); ++k) acc += s.w[k] * f[s.idx[k]](i, j);
  return acc;
}

inline double eval_stencil(const TriStencil& s, const std::vector<double>& f) {
  return s.w[0] * f[s.idx[0]] + s.w[1] * f[s.idx[1]] + s.w[2] * f[s.idx[2]];
}

inline double eval_stencil(const TriStencil& s, const MatField& f, int i, int j) {
  return s.w[0] * f[s.idx[0]](i, j) + s.w[1] * f[s.idx[1]](i, j) + s.w[2] * f[s.idx[2]](i, j);
}

/// Piecewise linear interpolation of nodal samples on [0, 1] (uniform, n
/// nodes). Values outside are clamped.
double interp_uniform(const std::vector<double>& f, double x);
Mat3 interp_uniform(const std::vector<Mat3>& f, double x);

/// As interp_uniform, but if a jump sits at `cut` inside the bracketing
/// cell, the value is extrapolated linearly from the two nodes on the query
/// side (or held constant if only one exists).
double interp_uniform_cut(const std::vector<double>& f, double x, double cut);

}  // namespace plate
