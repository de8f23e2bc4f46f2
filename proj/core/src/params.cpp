#include "plate/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "plate/errors.hpp"

namespace plate {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("parameter ") + name + " must be positive and finite");
  }
}

}  // namespace

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
  return out;
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  std::vector<double> w(n, h);
  if (n == 0) return w;
  if (n == 1) {
    w[0] = 0.0;
    return w;
  }
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  }
  return out;
}

void PhysicalParams::validate() const {
  require_positive(L1, "L1_star");
  require_positive(L2, "L2_star");
  require_positive(h, "h_star");
  require_positive(rho, "rho_star");
  require_positive(E, "E_star");
  require_positive(G, "G_star");
  require_positive(kprime, "k_prime");
  require_positive(I, "I_star");
  require_positive(I1, "I1_star");
  require_positive(I2, "I2_star");
  require_positive(mach, "M_star");
  require_positive(rho_f, "rhof_star");
  if (!(U >= 0.0) || !std::isfinite(U)) {
    throw ConfigError("parameter U_star must be nonnegative and finite");
  }
  if (kprime > 1.0) throw ConfigError("parameter k_prime must lie in (0, 1]");
}

Vec3 DimensionlessParams::speeds() const {
  return {1.0 / std::sqrt(eps), 1.0 / std::sqrt(mu1), 1.0 / std::sqrt(mu2)};
}

void DimensionlessParams::validate() const {
  require_positive(eps, "epsilon");
  require_positive(mu1, "mu1");
  require_positive(mu2, "mu2");
  require_positive(a, "a");
  require_positive(L, "L");
  if (!std::isfinite(theta) || !std::isfinite(xi)) {
    throw ConfigError("parameters theta and xi must be finite");
  }
  const Vec3 s = speeds();
  if (!(s(0) < s(1) && s(1) < s(2))) {
    throw UnsupportedRegime(
        "unsupported regime: the model requires 1/sqrt(epsilon) < 1/sqrt(mu1) < "
        "1/sqrt(mu2), i.e. epsilon > mu1 > mu2");
  }
}

DimensionlessParams nondimensionalize(const PhysicalParams& p, const ParamOverrides& o) {
  p.validate();
  DimensionlessParams d;
  const double EI = p.E * p.I;
  const double L1_3 = p.L1 * p.L1 * p.L1;
  const double L1_5 = L1_3 * p.L1 * p.L1;
  d.L = p.L2 / p.L1;
  d.h = p.h / p.L1;
  d.G = p.G * L1_3 / EI;
  d.rho = p.rho * L1_5 / EI;
  d.I = p.I / L1_3;
  d.I1 = p.I1 / L1_3;
  d.I2 = p.I2 / L1_3;
  d.rho_f = p.rho_f * L1_5 / EI;
  d.U = p.U / p.L1;
  d.mach = p.mach;
  d.kprime = p.kprime;

  const double kGh = d.kprime * d.G * d.h;
  d.eps = d.rho * d.h / kGh;
  d.mu1 = d.rho * d.I1;
  d.mu2 = d.rho * d.I2;
  d.a = d.rho * d.h;
  d.theta = d.rho_f * d.U / (d.mach * kGh);
  d.xi = d.rho_f * d.U * d.U / (d.mach * kGh);

  if (o.eps) d.eps = *o.eps;
  if (o.mu1) d.mu1 = *o.mu1;
  if (o.mu2) d.mu2 = *o.mu2;
  if (o.a) d.a = *o.a;
  if (o.theta) d.theta = *o.theta;
  if (o.xi) d.xi = *o.xi;
  if (o.L) d.L = *o.L;

  d.validate();
  const double se = std::sqrt(d.eps);
  d.c1bar = d.xi / (2.0 * se) + d.theta / (2.0 * d.eps);
  d.c2bar = d.xi / (2.0 * se) - d.theta / (2.0 * d.eps);
  return d;
}

DimensionlessParams reference_profile() {
  ParamOverrides o;
  o.eps = 3.0;
  o.mu1 = 1.8;
  o.mu2 = 0.2;
  o.a = 0.2;
  o.theta = 0.057;
  o.xi = 0.2;
  o.L = 9.0;
  return nondimensionalize(PhysicalParams{}, o);
}

ModalCoefficients::ModalCoefficients(const DimensionlessParams& d, int n)
    : d_(d), n_(n) {
  if (n < 0) throw ConfigError("mode index must be nonnegative");
  d_.validate();
  k_ = static_cast<double>(n) * std::numbers::pi / d_.L;
  se_ = std::sqrt(d_.eps);
  sm1_ = std::sqrt(d_.mu1);
  sm2_ = std::sqrt(d_.mu2);
  sigma_ = Vec3(1.0 / se_, 1.0 / sm1_, 1.0 / sm2_).asDiagonal();
  sigma_inv_ = Vec3(se_, sm1_, sm2_).asDiagonal();
  // clang-format off
  A_ << 0.0, -sigma_(0, 0),        0.0,
        0.0,  0.0,                 0.0,
        0.0,  k_ * sigma_(2, 2),   0.0;
  C_ = -Mat3::Identity();
  D_ << 0.0,  2.0,         0.0,
        0.0,  0.0,         0.0,
        0.0, -2.0 * k_,    0.0;
  // clang-format on
}

ModalCoefficients ModalCoefficients::uncoupled(const DimensionlessParams& d, int n) {
  ModalCoefficients c(d, n);
  c.coupled_ = false;
  c.A_.setZero();
  c.D_.setZero();
  return c;
}

double ModalCoefficients::c1(double x) const {
  return d_.c2bar * std::exp(se_ * (d_.c1bar - d_.c2bar) * x);
}
double ModalCoefficients::c2(double x) const {
  return -std::exp(se_ * d_.c1bar * x) / (2.0 * se_);
}
double ModalCoefficients::c3(double x) const {
  return -d_.c1bar * std::exp(-se_ * (d_.c1bar - d_.c2bar) * x);
}
double ModalCoefficients::c4(double x) const {
  return std::exp(se_ * d_.c2bar * x) / (2.0 * se_);
}
double ModalCoefficients::c5(double x) const { return std::exp(-se_ * d_.c1bar * x); }
double ModalCoefficients::c6(double x) const { return std::exp(-se_ * d_.c2bar * x); }
double ModalCoefficients::f11(double x, double y) const {
  return std::exp(se_ * d_.c1bar * (x - y));
}
double ModalCoefficients::f12(double x, double y) const {
  return std::exp(se_ * (d_.c1bar * x - d_.c2bar * y));
}
double ModalCoefficients::f21(double x, double y) const {
  return std::exp(se_ * (d_.c2bar * x - d_.c1bar * y));
}
double ModalCoefficients::f22(double x, double y) const {
  return std::exp(se_ * d_.c2bar * (x - y));
}

Mat3 ModalCoefficients::F11(double x) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  const double g = d_.a / (4.0 * d_.eps * sm1_);
  // clang-format off
  m << 0.5 * c1(x),          c2(x),                 0.0,
       g * (c5(x) + c6(x)),  0.0,                  -k_ / (2.0 * sm1_),
       0.0,                  k_ / (2.0 * sm2_),     0.0;
  // clang-format on
  return m;
}

Mat3 ModalCoefficients::F12(double x) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  m(0, 0) = -0.5 * c1(x);
  m(1, 0) = d_.a * (c5(x) - c6(x)) / (4.0 * d_.eps * sm1_);
  return m;
}

Mat3 ModalCoefficients::F21(double x) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  const double g = d_.a / (4.0 * d_.eps * sm1_);
  // clang-format off
  m << 0.5 * c3(x),           c4(x),                 0.0,
       -g * (c5(x) + c6(x)),  0.0,                   k_ / (2.0 * sm1_),
       0.0,                  -k_ / (2.0 * sm2_),     0.0;
  // clang-format on
  return m;
}

Mat3 ModalCoefficients::F22(double x) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  m(0, 0) = 0.5 * c3(x);
  m(1, 0) = -d_.a * (c5(x) - c6(x)) / (4.0 * d_.eps * sm1_);
  return m;
}

Mat3 ModalCoefficients::F13(double x) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  const double stiff = k_ * k_ + d_.a / d_.eps;
  // clang-format off
  m << 2.0 * k_ * k_ * c2(x),              0.0,           -2.0 * k_ * c2(x),
       0.0,                               -stiff / sm1_,   0.0,
       d_.a * k_ / (d_.eps * sm2_),        0.0,           -stiff / sm2_;
  // clang-format on
  return m;
}

Mat3 ModalCoefficients::F23(double x) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  const double stiff = k_ * k_ + d_.a / d_.eps;
  // clang-format off
  m << 2.0 * k_ * k_ * c4(x),              0.0,           -2.0 * k_ * c4(x),
       0.0,                                stiff / sm1_,   0.0,
      -d_.a * k_ / (d_.eps * sm2_),        0.0,            stiff / sm2_;
  // clang-format on
  return m;
}

Mat3 ModalCoefficients::F14(double x, double y) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  const double stiff = k_ * k_ + d_.a / d_.eps;
  // clang-format off
  m << -k_ * k_ / (2.0 * se_) * f11(x, y),            0.0,                   -k_ * c2(x),
        0.0,                                         -stiff / (2.0 * sm1_),   0.0,
        d_.a * k_ / (2.0 * d_.eps * sm2_) * c5(y),    0.0,                   -stiff / (2.0 * sm2_);
  // clang-format on
  return m;
}

Mat3 ModalCoefficients::F15(double x, double y) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  const double stiff = k_ * k_ + d_.a / d_.eps;
  // clang-format off
  m << -k_ * k_ / (2.0 * se_) * f12(x, y),            0.0,                   -k_ * c2(x),
        0.0,                                         -stiff / (2.0 * sm1_),   0.0,
        d_.a * k_ / (2.0 * d_.eps * sm2_) * c6(y),    0.0,                   -stiff / (2.0 * sm2_);
  // clang-format on
  return m;
}

Mat3 ModalCoefficients::F24(double x, double y) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  const double stiff = k_ * k_ + d_.a / d_.eps;
  // clang-format off
  m <<  k_ * k_ / (2.0 * se_) * f21(x, y),            0.0,                   -k_ * c4(x),
        0.0,                                          stiff / (2.0 * sm1_),   0.0,
       -d_.a * k_ / (2.0 * d_.eps * sm2_) * c5(y),    0.0,                    stiff / (2.0 * sm2_);
  // clang-format on
  return m;
}

Mat3 ModalCoefficients::F25(double x, double y) const {
  Mat3 m = Mat3::Zero();
  if (!coupled_) return m;
  const double stiff = k_ * k_ + d_.a / d_.eps;
  // clang-format off
  m <<  k_ * k_ / (2.0 * se_) * f22(x, y),            0.0,                   -k_ * c4(x),
        0.0,                                          stiff / (2.0 * sm1_),   0.0,
       -d_.a * k_ / (2.0 * d_.eps * sm2_) * c6(y),    0.0,                    stiff / (2.0 * sm2_);
  // clang-format on
  return m;
}

Mat3 ModalCoefficients::Phi0(const Vec3& delta, Phi32Mode mode) const {
  const double entry32 =
      mode == Phi32Mode::kScaled ? -k_ : -static_cast<double>(n_) * std::numbers::pi;
  Mat3 m;
  // clang-format off
  m << -delta(0) * se_,  1.0,               0.0,
        0.0,            -delta(1) * sm1_,   0.0,
        0.0,             entry32,          -delta(2) * sm2_;
  // clang-format on
  return m;
}

}  // namespace plate
