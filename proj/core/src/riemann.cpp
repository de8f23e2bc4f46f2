#include "plate/riemann.hpp"

#include <cmath>

#include "plate/errors.hpp"

namespace plate {

namespace {

void check_size(const Eigen::VectorXd& v, std::size_t n, const char* name) {
  if (static_cast<std::size_t>(v.size()) != n) {
    throw ShapeError(std::string("field ") + name + " does not match the state grid");
  }
}

Eigen::VectorXd cumulative(const Eigen::VectorXd& f, double h) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
  for (Eigen::Index i = 1; i < f.size(); ++i) out(i) = out(i - 1) + 0.5 * h * (f(i - 1) + f(i));
  return out;
}

}  // namespace

PhysicalModalState PhysicalModalState::zeros(const Grid1D& g, double t) {
  PhysicalModalState s;
  s.grid = g;
  s.t = t;
  const auto n = static_cast<Eigen::Index>(g.n);
  for (auto* v : {&s.w, &s.alpha, &s.beta, &s.w_t, &s.alpha_t, &s.beta_t, &s.w_x, &s.alpha_x,
                  &s.beta_x}) {
    *v = Eigen::VectorXd::Zero(n);
  }
  return s;
}

HyperbolicModalState HyperbolicModalState::zeros(const Grid1D& g, double t) {
  HyperbolicModalState h;
  h.grid = g;
  h.t = t;
  h.Z = Field3::Zero(3, static_cast<Eigen::Index>(g.n));
  h.Y = Field3::Zero(3, static_cast<Eigen::Index>(g.n));
  return h;
}

double riemann_weight1(const DimensionlessParams& d, double x) {
  return std::exp(std::sqrt(d.eps) * d.c1bar * x);
}

double riemann_weight2(const DimensionlessParams& d, double x) {
  return std::exp(std::sqrt(d.eps) * d.c2bar * x);
}

HyperbolicModalState to_hyperbolic(const PhysicalModalState& s, const DimensionlessParams& d) {
  const std::size_t n = s.grid.n;
  check_size(s.w, n, "w");
  check_size(s.alpha, n, "alpha");
  check_size(s.beta, n, "beta");
  check_size(s.w_t, n, "w_t");
  check_size(s.alpha_t, n, "alpha_t");
  check_size(s.beta_t, n, "beta_t");
  check_size(s.w_x, n, "w_x");
  check_size(s.alpha_x, n, "alpha_x");
  check_size(s.beta_x, n, "beta_x");

  const double se = std::sqrt(d.eps), sm1 = std::sqrt(d.mu1), sm2 = std::sqrt(d.mu2);
  HyperbolicModalState h = HyperbolicModalState::zeros(s.grid, s.t);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double x = s.grid.at(i);
    const double k1 = riemann_weight1(d, x), k2 = riemann_weight2(d, x);
    h.Z(0, k) = k1 * (s.w_x(k) + se * s.w_t(k));
    h.Y(0, k) = k2 * (s.w_x(k) - se * s.w_t(k));
    h.Z(1, k) = s.alpha_x(k) + sm1 * s.alpha_t(k);
    h.Y(1, k) = s.alpha_x(k) - sm1 * s.alpha_t(k);
    h.Z(2, k) = s.beta_x(k) + sm2 * s.beta_t(k);
    h.Y(2, k) = s.beta_x(k) - sm2 * s.beta_t(k);
  }
  h.X = Vec3(s.w(0), s.alpha(0), s.beta(0));
  return h;
}

PhysicalModalState to_physical(const HyperbolicModalState& h, const DimensionlessParams& d) {
  const std::size_t n = h.grid.n;
  if (static_cast<std::size_t>(h.Z.cols()) != n || static_cast<std::size_t>(h.Y.cols()) != n) {
    throw ShapeError("characteristic fields do not match the state grid");
  }
  const double se = std::sqrt(d.eps), sm1 = std::sqrt(d.mu1), sm2 = std::sqrt(d.mu2);
  PhysicalModalState s = PhysicalModalState::zeros(h.grid, h.t);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double x = h.grid.at(i);
    const double a = h.Z(0, k) / riemann_weight1(d, x);
    const double b = h.Y(0, k) / riemann_weight2(d, x);
    s.w_x(k) = 0.5 * (a + b);
    s.w_t(k) = 0.5 * (a - b) / se;
    s.alpha_x(k) = 0.5 * (h.Z(1, k) + h.Y(1, k));
    s.alpha_t(k) = 0.5 * (h.Z(1, k) - h.Y(1, k)) / sm1;
    s.beta_x(k) = 0.5 * (h.Z(2, k) + h.Y(2, k));
    s.beta_t(k) = 0.5 * (h.Z(2, k) - h.Y(2, k)) / sm2;
  }
  const double dx = h.grid.step();
  s.w = cumulative(s.w_x, dx).array() + h.X(0);
  s.alpha = cumulative(s.alpha_x, dx).array() + h.X(1);
  s.beta = cumulative(s.beta_x, dx).array() + h.X(2);
  return s;
}

}  // namespace plate
