#include "lightning/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>

namespace lightning::analysis {

SupError sup_error(const lp::RationalApprox& approx, const lp::Target& target,
                   const geometry::SectorDomain& domain, const geometry::SampleGrid& grid) {
  if (grid.points.empty()) throw Error("sup_error: empty grid");
  SupError out;
  for (Complex z : grid.points) {
    if (!domain.contains(z, 1e-12)) throw Error("sup_error: grid point outside the domain");
    Complex v;
    try {
      v = lp::eval(approx, z);
    } catch (const Error&) {
      ++out.skipped;
      continue;
    }
    ++out.evaluated;
    out.value = std::max(out.value, std::abs(v - target(z)));
  }
  if (out.skipped > 0) {
    std::clog << "warning: sup_error skipped " << out.skipped << " point(s) at poles\n";
    if (100 * out.skipped > grid.points.size()) throw Error("sup_error: too many points skipped");
  }
  return out;
}

RefinedSup refined_sup_error(const lp::RationalApprox& approx, const lp::Target& target,
                             const geometry::SectorDomain& domain, double min_radius,
                             int n_arc, double ratio, int max_doublings) {
  if (!(min_radius > 0.0)) throw Error("refined_sup_error: min_radius must be positive");
  const double depth = std::log(min_radius / domain.radius);
  RefinedSup out;
  double prev = -1.0;
  for (int d = 0; d <= max_doublings; ++d) {
    const int n_ray = std::max(2, static_cast<int>(std::ceil(depth / std::log(ratio))) + 1);
    const auto grid = geometry::sample_sector(domain, n_ray, n_arc, ratio);
    const double s = sup_error(approx, target, domain, grid).value;
    out.value = s;
    out.doublings = d;
    out.points = grid.size();
    if (prev >= 0.0 && std::abs(s - prev) < 0.05 * std::max(s, prev)) {
      out.converged = true;
      break;
    }
    if (prev >= 0.0 && s == 0.0 && prev == 0.0) {
      out.converged = true;
      break;
    }
    prev = s;
    ratio = std::sqrt(ratio);
    n_arc *= 2;
  }
  return out;
}

PredictedRate predicted_log_rate(double sigma, double alpha, double beta, lp::TargetKind target) {
  const double so = lp::sigma_opt(alpha, beta);
  PredictedRate p;
  if (sigma <= so) {
    p.rate = sigma * alpha;
    const bool log = target == lp::TargetKind::power_log ||
                     target == lp::TargetKind::prefactor_power_log;
    p.log_prefactor_power = log ? 0.5 : 0.0;
  } else {
    p.rate = kPi * (so / sigma) * std::sqrt(2.0 * (2.0 - beta) * alpha);
  }
  return p;
}

double predicted_log_error(const PredictedRate& p, double sigma, double alpha, int n) {
  const double lin = -p.rate * std::sqrt(double(n));
  if (p.log_prefactor_power == 0.0) return lin;
  return lin + p.log_prefactor_power * std::log(n * sigma * sigma * alpha * alpha);
}

RateFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("fit_line: size mismatch");
  const double n = double(x.size());
  if (x.size() < 2) throw Error("insufficient span");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("insufficient span");
  RateFit f;
  f.rho = sxy / sxx;
  f.intercept = my - f.rho * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  f.used = static_cast<int>(x.size());
  return f;
}

RateFit fit_rate(std::span<const ConvergenceRecord> records, double floor, double ceiling,
                 RateAxis axis) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : records) {
    if (!(r.sup_err > floor && r.sup_err < ceiling)) continue;
    x.push_back(std::sqrt(double(axis == RateAxis::poles ? r.N1 : r.N)));
    y.push_back(-std::log(r.sup_err));
  }
  if (x.size() < 4) throw Error("insufficient span");
  return fit_line(x, y);
}

// ---------------------------------------------------------------------------
// Bound constants

double BoundContext::a0beta(double x) const {
  return (2.0 - beta) * alpha * kPi * (T + alpha * std::log(x / C));
}

Complex BoundContext::lattice_pole(int k, double x, double theta, int sign) const {
  const Complex w(T + alpha * std::log(x / C),
                  alpha * kPi * (2.0 * k - 1.0 + (sign >= 0 ? 1.0 : -1.0) * theta / 2.0));
  return w * w;
}

int smallest_M0(double alpha, double beta, double h) {
  const double ap = alpha * kPi;
  const double inner = std::sqrt((4.0 + beta) * ap / 2.0) + std::pow(4.0 * h, 0.25);
  const double need = std::max({h, std::sqrt(2.0) * ap, 2.0 * std::sqrt(6.0) * ap * ap,
                                ap * inner * inner});
  int m = 1;
  while (ap * std::sqrt(m * h) < need) ++m;
  return m;
}

BoundContext make_bound_context(double alpha, double beta, double sigma, double C, double T) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("bound context: alpha must lie in (0, 1)");
  if (!(beta >= 0.0 && beta < 2.0)) throw Error("bound context: beta must lie in [0, 2)");
  if (!(sigma > 0.0 && C > 0.0 && T >= 0.0)) throw Error("bound context: bad sigma, C or T");
  BoundContext b;
  b.alpha = alpha;
  b.beta = beta;
  b.sigma = sigma;
  b.C = C;
  b.T = T;
  b.h = sigma * sigma * alpha * alpha;
  b.eta = lp::sigma_opt(alpha, beta) / sigma;
  b.M0 = smallest_M0(alpha, beta, b.h);
  const double base = b.M0 * b.h + 0.25 * (2.0 - beta) * (2.0 - beta) * alpha * alpha * kPi * kPi;
  auto collides = [&](double c2) {
    const double j = std::max(1.0, std::round(c2 / b.h));
    return std::abs(c2 - j * b.h) < 1e-9;
  };
  while (collides(base + b.delta0)) b.delta0 += b.h * 1e-3;
  b.c0 = std::sqrt(base + b.delta0);
  b.x_star = C * std::exp((b.c0 - T) / alpha);
  return b;
}

Envelope q_envelope(double x, const BoundContext& ctx) {
  if (!(x >= ctx.x_star && x <= 1.0)) throw Error("outside envelope validity");
  const double e2 = ctx.eta * ctx.eta;
  // 2 pi a0beta / h equals eta^2 (T + alpha log(x/C)).
  const double expo = e2 * (ctx.T + ctx.alpha * std::log(x / ctx.C));
  Envelope out;
  out.Q = std::pow(x, ctx.alpha) / std::expm1(expo);
  const double sh = std::sqrt(ctx.h) / 2.0;
  const double at_edge = std::exp(sh) * std::exp(-ctx.T) / std::expm1(e2 * sh);
  const double at_one = 1.0 / std::expm1(e2 * ctx.T);
  if (ctx.eta >= 1.0) {
    out.lower = at_one;
    out.upper = at_edge;
  } else {
    out.lower = std::pow(1.0 - e2, 1.0 - 1.0 / e2) * std::exp(-ctx.T) / e2;
    out.upper = std::max(at_one, at_edge);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature error

std::vector<QuadErrorRow> quad_error_curve(std::span<const kernels::KernelConfig> cfgs,
                                           lp::TargetKind target,
                                           const geometry::SampleGrid& grid) {
  const bool log = target == lp::TargetKind::power_log ||
                   target == lp::TargetKind::prefactor_power_log;
  std::vector<QuadErrorRow> rows;
  for (const auto& cfg : cfgs) {
    QuadErrorRow row;
    row.T = cfg.T();
    row.N_t = cfg.N_t;
    row.h = cfg.h;
    for (Complex z : grid.points) {
      const Complex I = log ? kernels::Ilog_of_z(z, cfg).value : kernels::I_of_z(z, cfg).value;
      const Complex r = log ? kernels::trapezoid_rlog(z, cfg) : kernels::trapezoid_r(z, cfg);
      row.err = std::max(row.err, std::abs(I - r));
    }
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.T < b.T; });
  return rows;
}

NearOrigin near_origin_check(const kernels::KernelConfig& cfg, double beta, int n_x,
                             int n_theta) {
  cfg.validate();
  const double sigma = std::sqrt(cfg.h) / cfg.alpha;
  const auto ctx = make_bound_context(cfg.alpha, beta, sigma, cfg.C, cfg.T());
  NearOrigin out;
  out.x_star = ctx.x_star;
  out.x_star_used = std::min(ctx.x_star, 1.0);
  const double T = cfg.T();
  const double scale_p = std::exp(-T);
  const double scale_l = T * std::exp(-T);
  // Radii from x* down twelve decades, geometrically; x = 0 adds nothing.
  for (int i = 0; i < n_x; ++i) {
    const double x = out.x_star_used * std::pow(1e-12, double(i) / (n_x - 1));
    for (int l = 0; l < n_theta; ++l) {
      const double theta = n_theta == 1 ? 0.0 : beta * l / (n_theta - 1);
      const Complex z = std::polar(x, theta * kPi / 2.0);
      const double ep = std::abs(kernels::I_of_z(z, cfg).value - kernels::trapezoid_r(z, cfg));
      const double el = std::abs(kernels::Ilog_of_z(z, cfg).value - kernels::trapezoid_rlog(z, cfg));
      out.max_ratio_power = std::max(out.max_ratio_power, ep / scale_p);
      out.max_ratio_log = std::max(out.max_ratio_log, el / scale_l);
    }
  }
  return out;
}

void write_records_csv(std::ostream& out, std::span<const ConvergenceRecord> records) {
  out << "sigma,N1,N2,N,sup_err,predicted_log_err,runtime_ms\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%d,%.17g,%.17g,%.17g\n", r.sigma, r.N1, r.N2, r.N,
                  r.sup_err, r.predicted_log_err, r.runtime_ms);
    out << buf;
  }
}

}  // namespace lightning::analysis
