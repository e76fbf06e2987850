#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "lightning/common.hpp"
#include "lightning/geometry.hpp"
#include "lightning/kernels.hpp"
#include "lightning/lp.hpp"

namespace lightning::analysis {

struct ConvergenceRecord {
  int N1 = 0;
  int N2 = 0;
  int N = 0;
  double sup_err = 0.0;
  double predicted_log_err = 0.0;
  double sigma = 0.0;
  double runtime_ms = 0.0;
};

struct SupError {
  double value = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // points sitting on a pole
};

// max |eval(approx, z) - target(z)| over the grid. Points that collide with a
// pole are skipped with a warning on stderr; more than 1% skipped is an error.
SupError sup_error(const lp::RationalApprox& approx, const lp::Target& target,
                   const geometry::SectorDomain& domain, const geometry::SampleGrid& grid);

struct RefinedSup {
  double value = 0.0;
  int doublings = 0;
  bool converged = false;  // last doubling moved the sup by less than 5%
  std::size_t points = 0;
};

// Sector sup norm with grid doubling: the radial ratio is square-rooted and
// the point counts doubled until the sup changes by less than 5%.
// `min_radius` fixes the clustering depth (the grid reaches below it).
RefinedSup refined_sup_error(const lp::RationalApprox& approx, const lp::Target& target,
                             const geometry::SectorDomain& domain, double min_radius,
                             int n_arc = 16, double ratio = 0.5, int max_doublings = 4);

struct PredictedRate {
  double rate = 0.0;
  // Power of (N sigma^2 alpha^2) multiplying the exponential: 1/2 for the log
  // target with sigma <= sigma_opt, else 0.
  double log_prefactor_power = 0.0;
};

PredictedRate predicted_log_rate(double sigma, double alpha, double beta, lp::TargetKind target);

// log of the predicted error e^{-rate sqrt(n)} (n sigma^2 alpha^2)^power.
double predicted_log_error(const PredictedRate& p, double sigma, double alpha, int n);

enum class RateAxis { poles, total };

struct RateFit {
  double rho = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int used = 0;
};

// Least-squares slope of -log(sup_err) against sqrt(N1) (RateAxis::poles) or
// sqrt(N1 + N2) (RateAxis::total), using only records with
// floor < sup_err < ceiling. Needs at least 4 such records.
RateFit fit_rate(std::span<const ConvergenceRecord> records, double floor = 1e-13,
                 double ceiling = 1e-2, RateAxis axis = RateAxis::poles);

// Plain least-squares line y = intercept + slope x.
RateFit fit_line(std::span<const double> x, std::span<const double> y);

struct BoundContext {
  double alpha = 0.5;
  double beta = 1.0;
  double sigma = 1.0;
  double C = 1.0;
  double h = 1.0;
  double T = 1.0;
  double eta = 1.0;
  int M0 = 1;
  double delta0 = 0.0;
  double c0 = 0.0;
  double x_star = 0.0;

  double a0beta(double x) const;
  // Pole u_k(z) of the substituted integrand for z = x e^{+-i theta pi/2}.
  Complex lattice_pole(int k, double x, double theta, int sign = +1) const;
};

BoundContext make_bound_context(double alpha, double beta, double sigma, double C, double T);
// Smallest M0 with alpha pi sqrt(M0 h) >= max{h, sqrt2 alpha pi, 2 sqrt6 alpha^2 pi^2,
// alpha pi (sqrt((4+beta) alpha pi/2) + (4h)^{1/4})^2}.
int smallest_M0(double alpha, double beta, double h);

struct Envelope {
  double Q = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Q(x) = x^alpha/(e^{2 pi a0beta(x)/h} - 1) with its lower and upper bounds.
// The bounds are those of the C = 1 analysis.
Envelope q_envelope(double x, const BoundContext& ctx);

struct QuadErrorRow {
  double T = 0.0;
  int N_t = 0;
  double h = 0.0;
  double err = 0.0;
};

// sup over the grid of |I - r_{N_t}| (or the log analogue) per config, sorted by T.
std::vector<QuadErrorRow> quad_error_curve(std::span<const kernels::KernelConfig> cfgs,
                                           lp::TargetKind target,
                                           const geometry::SampleGrid& grid);

struct NearOrigin {
  double max_ratio_power = 0.0;
  double max_ratio_log = 0.0;
  double x_star = 0.0;       // from the bound context
  double x_star_used = 0.0;  // clipped to the unit sector
};

// Max over x in [0, x*], theta in [0, beta] of |I - r_{N_t}|/e^{-T} and
// |I_log - r~_{N_t}|/(T e^{-T}).
NearOrigin near_origin_check(const kernels::KernelConfig& cfg, double beta, int n_x = 24,
                             int n_theta = 5);

void write_records_csv(std::ostream& out, std::span<const ConvergenceRecord> records);

}  // namespace lightning::analysis
