#pragma once

#include <optional>
#include <vector>

#include "lightning/common.hpp"
#include "lightning/quadrature.hpp"

namespace lightning::kernels {

using quad::QuadratureResult;

// Parameters of the truncated integral representation and its trapezoidal
// discretisation. T defaults to sqrt(N_t h)/(kappa+1); callers that derive the
// configuration from a pole count pin T so the first poles coincide with the
// tapered lightning poles exactly.
struct KernelConfig {
  double alpha = 0.5;
  double C = 1.0;
  double h = 1.0;
  int N_t = 1;
  std::optional<double> T_override;

  double kappa() const { return alpha / (1.0 - alpha); }
  double T() const;
  // Upper end of the substituted integration range, (kappa+1)^2 T^2.
  double u_max() const;
  void validate() const;
  // T >= (1-alpha)(2 log 2 - log C); the truncation bound needs it.
  bool truncation_valid() const;

  // Configuration with step h whose truncation parameter is (as nearly as an
  // integer N_t allows) the requested T; T is pinned to the requested value.
  static KernelConfig with_T(double alpha, double C, double h, double T);
};

// Principal branch z^alpha; throws "branch cut" on the open negative axis.
Complex ref_power(Complex z, double alpha);
// Principal branch z^alpha log z (0 at z = 0).
Complex ref_power_log(Complex z, double alpha);

// Adaptive evaluation of the full-line integral representations.
QuadratureResult power_integral(Complex z, double alpha, double tol);
QuadratureResult power_log_integral(Complex z, double alpha, double tol);

// |integral representation - z^alpha| with the integral evaluated adaptively.
double identity_residual(Complex z, double alpha, double tol);
double identity_residual_log(Complex z, double alpha, double tol);

double chi(double alpha, double C);

// Truncated integrals I(z), I_log(z) over u in [0, (kappa+1)^2 T^2].
QuadratureResult I_of_z(Complex z, const KernelConfig& cfg);
QuadratureResult Ilog_of_z(Complex z, const KernelConfig& cfg);

// Pole p_j = -C e^{(sqrt(j h) - T)/alpha}, j = 1..N_t.
double pole(const KernelConfig& cfg, int j);
std::vector<double> poles(const KernelConfig& cfg);

// Trapezoidal sums r_{N_t}(z) and the log-target analogue; summed in
// ascending j. Throw "pole collision" when z sits on a pole.
Complex trapezoid_r(Complex z, const KernelConfig& cfg);
Complex trapezoid_rlog(Complex z, const KernelConfig& cfg);

// Coefficient of the second (sqrt(h/j)-weighted) group in the log sum:
// (1/2)(chi/C^alpha - T sin(alpha pi)/(alpha^2 pi)).
double log_second_weight(const KernelConfig& cfg);

// z |p|^alpha / (z - p) for a pole p < 0; the common summand of every sum.
Complex pole_term(Complex z, double p, double alpha);

}  // namespace lightning::kernels
