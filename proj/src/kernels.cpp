#include "lightning/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lightning::kernels {

// ---------------------------------------------------------------------------
// KernelConfig

double KernelConfig::T() const {
  if (T_override) return *T_override;
  return std::sqrt(N_t * h) / (kappa() + 1.0);
}

double KernelConfig::u_max() const {
  const double s = (kappa() + 1.0) * T();
  return s * s;
}

void KernelConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("kernel config: alpha must lie in (0, 1)");
  if (!(C > 0.0)) throw Error("kernel config: C must be positive");
  if (!(h > 0.0)) throw Error("kernel config: h must be positive");
  if (N_t < 1) throw Error("kernel config: N_t must be positive");
  if (T_override && !(*T_override > 0.0)) throw Error("kernel config: T must be positive");
}

bool KernelConfig::truncation_valid() const {
  return T() >= (1.0 - alpha) * (2.0 * std::log(2.0) - std::log(C));
}

KernelConfig KernelConfig::with_T(double alpha, double C, double h, double T) {
  KernelConfig cfg;
  cfg.alpha = alpha;
  cfg.C = C;
  cfg.h = h;
  const double k1 = alpha / (1.0 - alpha) + 1.0;
  cfg.N_t = std::max(1, static_cast<int>(std::floor(k1 * k1 * T * T / h + 1e-9)));
  cfg.T_override = T;
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Reference functions

Complex ref_power(Complex z, double alpha) {
  if (z == Complex(0.0, 0.0)) return {0.0, 0.0};
  if (z.imag() == 0.0 && z.real() < 0.0) throw Error("branch cut");
  return std::exp(alpha * std::log(z));
}

Complex ref_power_log(Complex z, double alpha) {
  if (z == Complex(0.0, 0.0)) return {0.0, 0.0};
  return ref_power(z, alpha) * std::log(z);
}

double chi(double alpha, double C) {
  const double ca = std::pow(C, alpha);
  return ca * std::sin(alpha * kPi) * std::log(C) / (alpha * kPi) +
         ca * std::cos(alpha * kPi) / alpha;
}

namespace {

// Lower bound of |e^{t/alpha} + z| / |z| valid for all real t.
double denominator_floor(Complex z) {
  const double phi = std::abs(std::arg(z));
  return phi <= kPi / 2.0 ? 1.0 : std::sin(phi);
}

struct Range {
  double lo;
  double hi;
};

// Integration range in t for the substituted full-line integrand
// z e^t / (e^{t/alpha} + z) (times a weight growing at most like |t|) so
// that both discarded tails stay below tail_tol.
Range full_line_range(Complex z, double alpha, double tail_tol, bool weighted) {
  const double kappa = alpha / (1.0 - alpha);
  const double s = denominator_floor(z);
  const double zabs = std::abs(z);
  double lo = std::min(-5.0, alpha * std::log(zabs) - 5.0);
  while ((weighted ? std::abs(lo) + 1.0 : 1.0) * std::exp(lo) / s > tail_tol) lo -= 1.0;
  double hi = std::max(5.0, alpha * std::log(2.0 * zabs) + 5.0);
  while ((weighted ? hi + kappa : 1.0) * 2.0 * zabs * kappa * std::exp(-hi / kappa) > tail_tol) {
    hi += 1.0;
  }
  return {lo, hi};
}

void require_sector_point(Complex z) {
  if (z.imag() == 0.0 && z.real() < 0.0) throw Error("branch cut");
}

}  // namespace

QuadratureResult power_integral(Complex z, double alpha, double tol) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
  require_sector_point(z);
  if (z == Complex(0.0, 0.0)) return {{0.0, 0.0}, 0.0, 1};
  const double scale = std::sin(alpha * kPi) / (alpha * kPi);
  const Range r = full_line_range(z, alpha, 0.05 * tol / scale, false);
  auto f = [&](double t) { return z * std::exp(t) / (std::exp(t / alpha) + z); };
  quad::AdaptiveOptions opts;
  opts.abs_tol = 0.25 * tol / scale;
  opts.rel_tol = 0.0;
  const std::array<double, 1> peak{alpha * std::log(std::abs(z))};
  auto res = quad::integrate(f, r.lo, r.hi, opts, peak);
  res.value *= scale;
  res.est_error *= scale;
  return res;
}

QuadratureResult power_log_integral(Complex z, double alpha, double tol) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
  require_sector_point(z);
  if (z == Complex(0.0, 0.0)) return {{0.0, 0.0}, 0.0, 1};
  const double a = std::sin(alpha * kPi) / (alpha * alpha * kPi);
  const double b = std::cos(alpha * kPi) / alpha;
  const double scale = std::abs(a) + std::abs(b);
  const Range r = full_line_range(z, alpha, 0.05 * tol / scale, true);
  auto f = [&](double t) { return (a * t + b) * z * std::exp(t) / (std::exp(t / alpha) + z); };
  quad::AdaptiveOptions opts;
  opts.abs_tol = 0.25 * tol;
  opts.rel_tol = 0.0;
  const std::array<double, 1> peak{alpha * std::log(std::abs(z))};
  return quad::integrate(f, r.lo, r.hi, opts, peak);
}

double identity_residual(Complex z, double alpha, double tol) {
  return std::abs(power_integral(z, alpha, tol).value - ref_power(z, alpha));
}

double identity_residual_log(Complex z, double alpha, double tol) {
  return std::abs(power_log_integral(z, alpha, tol).value - ref_power_log(z, alpha));
}

// ---------------------------------------------------------------------------
// Truncated integrals

namespace {

QuadratureResult truncated(Complex z, const KernelConfig& cfg, double a, double b) {
  cfg.validate();
  require_sector_point(z);
  if (z == Complex(0.0, 0.0)) return {{0.0, 0.0}, 0.0, 1};
  const double alpha = cfg.alpha;
  const double C = cfg.C;
  const double ca = std::pow(C, alpha);
  // u = (t + T)^2 turns the u-integral of f(u, z) into an integral in t.
  auto f = [&](double t) {
    return (a * t + b) * z * ca * std::exp(t) / (C * std::exp(t / alpha) + z);
  };
  quad::AdaptiveOptions opts;
  opts.abs_tol = 1e-16;
  opts.rel_tol = 2e-15;
  const double T = cfg.T();
  const std::array<double, 3> cuts{alpha * std::log(std::abs(z) / C), 0.0, -0.5 * T};
  return quad::integrate(f, -T, cfg.kappa() * T, opts, cuts);
}

}  // namespace

QuadratureResult I_of_z(Complex z, const KernelConfig& cfg) {
  return truncated(z, cfg, 0.0, std::sin(cfg.alpha * kPi) / (cfg.alpha * kPi));
}

QuadratureResult Ilog_of_z(Complex z, const KernelConfig& cfg) {
  // The chi term multiplies the integral without the C^alpha factor carried by
  // f(u, z); dividing by C^alpha keeps I_log consistent with the log sum.
  const double a = std::sin(cfg.alpha * kPi) / (cfg.alpha * cfg.alpha * kPi);
  const double b = chi(cfg.alpha, cfg.C) / std::pow(cfg.C, cfg.alpha);
  return truncated(z, cfg, a, b);
}

// ---------------------------------------------------------------------------
// Trapezoidal sums

double pole(const KernelConfig& cfg, int j) {
  return -cfg.C * std::exp((std::sqrt(j * cfg.h) - cfg.T()) / cfg.alpha);
}

std::vector<double> poles(const KernelConfig& cfg) {
  std::vector<double> p(static_cast<std::size_t>(cfg.N_t));
  for (int j = 1; j <= cfg.N_t; ++j) p[static_cast<std::size_t>(j - 1)] = pole(cfg, j);
  return p;
}

Complex pole_term(Complex z, double p, double alpha) {
  const Complex d = z - p;
  if (std::abs(d) < 1e-14 * std::abs(p)) throw Error("pole collision");
  return z * (std::exp(alpha * std::log(-p)) / d);
}

double log_second_weight(const KernelConfig& cfg) {
  const double s = std::sin(cfg.alpha * kPi);
  return 0.5 * (chi(cfg.alpha, cfg.C) / std::pow(cfg.C, cfg.alpha) -
                cfg.T() * s / (cfg.alpha * cfg.alpha * kPi));
}

Complex trapezoid_r(Complex z, const KernelConfig& cfg) {
  cfg.validate();
  if (z == Complex(0.0, 0.0)) return {0.0, 0.0};
  Complex sum{0.0, 0.0};
  for (int j = 1; j <= cfg.N_t; ++j) {
    sum += std::sqrt(cfg.h / j) * pole_term(z, pole(cfg, j), cfg.alpha);
  }
  return std::sin(cfg.alpha * kPi) / (2.0 * cfg.alpha * kPi) * sum;
}

Complex trapezoid_rlog(Complex z, const KernelConfig& cfg) {
  cfg.validate();
  if (z == Complex(0.0, 0.0)) return {0.0, 0.0};
  const double w1 = cfg.h * std::sin(cfg.alpha * kPi) / (2.0 * cfg.alpha * cfg.alpha * kPi);
  const double w2 = log_second_weight(cfg);
  Complex sum{0.0, 0.0};
  for (int j = 1; j <= cfg.N_t; ++j) {
    sum += (w1 + w2 * std::sqrt(cfg.h / j)) * pole_term(z, pole(cfg, j), cfg.alpha);
  }
  return sum;
}

}  // namespace lightning::kernels
