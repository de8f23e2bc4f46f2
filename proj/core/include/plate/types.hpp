#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace plate {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
/// Three components sampled on a 1-D grid, one column per node.
using Field3 = Eigen::Matrix3Xd;

/// Uniform grid on [0, 1] with `n` nodes.
struct Grid1D {
  std::size_t n = 21;

  double step() const { return 1.0 / static_cast<double>(n - 1); }
  double at(std::size_t i) const { return static_cast<double>(i) * step(); }
  std::vector<double> nodes() const;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

/// Composite trapezoid weights on `n` uniform nodes of spacing `h`.
std::vector<double> trapezoid_weights(std::size_t n, double h);

/// Cumulative trapezoid integral of samples `f` with spacing `h`, starting at 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h);

}  // namespace plate
