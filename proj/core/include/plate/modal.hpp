#pragma once

#include <vector>

#include <Eigen/Core>

namespace plate {

enum class Basis { kSine, kCosine };

/// sin(n pi y / L) or cos(n pi y / L).
double basis_value(Basis b, int n, double y, double L);

/// `points` uniform samples of [0, L].
std::vector<double> uniform_y_grid(int points, double L);

/// Modal coefficients of samples taken on a uniform y-grid over [0, L].
/// Uses 2/L for n >= 1 and 1/L for the n = 0 cosine term, with the composite
/// trapezoid rule. Returns N+1 values; sine n = 0 is stored as zero.
std::vector<double> project(const std::vector<double>& samples, Basis b, int N, double L);

/// Row-wise version: `field` has one row per x node and one column per y
/// sample. Result has one row per mode and one column per x node.
Eigen::MatrixXd project(const Eigen::MatrixXd& field, Basis b, int N, double L);

/// Inverse of project: coefficients (one row per mode, one column per x
/// node) summed on the y-grid. Result has one row per x node.
Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& coeffs, Basis b,
                            const std::vector<double>& y, double L);

/// Truncated per-mode series of the three plate fields and their rates.
/// Each matrix is (N+1) x nx.
struct ModalSeries {
  int N = 0;
  double L = 9.0;
  Eigen::MatrixXd w, alpha, beta, w_t, alpha_t, beta_t;
};

struct PlateField2D {
  std::vector<double> y;
  Eigen::MatrixXd w, alpha, beta, w_t, alpha_t, beta_t;  // nx x ny
};

PlateField2D reconstruct(const ModalSeries& s, const std::vector<double>& y);
ModalSeries project(const PlateField2D& f, int N, double L);

}  // namespace plate
