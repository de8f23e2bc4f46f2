#include "plate/modal.hpp"

#include <cmath>
#include <numbers>

#include "plate/errors.hpp"
#include "plate/types.hpp"

namespace plate {

namespace {

void check_args(int N, double L) {
  if (N < 0) throw ConfigError("truncation order N must be nonnegative");
  if (!(L > 0.0)) throw ConfigError("basis length L must be positive");
}

}  // namespace

double basis_value(Basis b, int n, double y, double L) {
  const double arg = static_cast<double>(n) * std::numbers::pi * y / L;
  return b == Basis::kSine ? std::sin(arg) : std::cos(arg);
}

std::vector<double> uniform_y_grid(int points, double L) {
  if (points < 2) throw ConfigError("y-grid needs at least two points");
  std::vector<double> y(static_cast<std::size_t>(points));
  const double h = L / static_cast<double>(points - 1);
  for (int j = 0; j < points; ++j) y[static_cast<std::size_t>(j)] = h * j;
  y.back() = L;
  return y;
}

std::vector<double> project(const std::vector<double>& samples, Basis b, int N, double L) {
  check_args(N, L);
  if (samples.size() < 2) throw ShapeError("projection needs at least two samples");
  const std::size_t ny = samples.size();
  const double h = L / static_cast<double>(ny - 1);
  const auto w = trapezoid_weights(ny, h);
  std::vector<double> out(static_cast<std::size_t>(N) + 1, 0.0);
  for (int n = 0; n <= N; ++n) {
    if (b == Basis::kSine && n == 0) continue;
    double acc = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      acc += w[j] * samples[j] * basis_value(b, n, h * static_cast<double>(j), L);
    }
    out[static_cast<std::size_t>(n)] = (n == 0 ? 1.0 : 2.0) / L * acc;
  }
  return out;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& field, Basis b, int N, double L) {
  check_args(N, L);
  const auto ny = field.cols();
  if (ny < 2) throw ShapeError("projection needs at least two samples");
  const double h = L / static_cast<double>(ny - 1);
  const auto w = trapezoid_weights(static_cast<std::size_t>(ny), h);
  // Weighted basis matrix, one column per mode.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ny, N + 1);
  for (int n = 0; n <= N; ++n) {
    if (b == Basis::kSine && n == 0) continue;
    const double scale = (n == 0 ? 1.0 : 2.0) / L;
    for (Eigen::Index j = 0; j < ny; ++j) {
      B(j, n) = scale * w[static_cast<std::size_t>(j)] *
                basis_value(b, n, h * static_cast<double>(j), L);
    }
  }
  return (field * B).transpose();
}

Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& coeffs, Basis b,
                            const std::vector<double>& y, double L) {
  const auto modes = coeffs.rows();
  Eigen::MatrixXd B(modes, static_cast<Eigen::Index>(y.size()));
  for (Eigen::Index n = 0; n < modes; ++n) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      B(n, static_cast<Eigen::Index>(j)) = basis_value(b, static_cast<int>(n), y[j], L);
    }
  }
  return coeffs.transpose() * B;
}

PlateField2D reconstruct(const ModalSeries& s, const std::vector<double>& y) {
  PlateField2D f;
  f.y = y;
  f.w = reconstruct(s.w, Basis::kSine, y, s.L);
  f.alpha = reconstruct(s.alpha, Basis::kSine, y, s.L);
  f.beta = reconstruct(s.beta, Basis::kCosine, y, s.L);
  f.w_t = reconstruct(s.w_t, Basis::kSine, y, s.L);
  f.alpha_t = reconstruct(s.alpha_t, Basis::kSine, y, s.L);
  f.beta_t = reconstruct(s.beta_t, Basis::kCosine, y, s.L);
  return f;
}

ModalSeries project(const PlateField2D& f, int N, double L) {
  ModalSeries s;
  s.N = N;
  s.L = L;
  s.w = project(f.w, Basis::kSine, N, L);
  s.alpha = project(f.alpha, Basis::kSine, N, L);
  s.beta = project(f.beta, Basis::kCosine, N, L);
  s.w_t = project(f.w_t, Basis::kSine, N, L);
  s.alpha_t = project(f.alpha_t, Basis::kSine, N, L);
  s.beta_t = project(f.beta_t, Basis::kCosine, N, L);
  return s;
}

}  // namespace plate
