#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lightning/common.hpp"

namespace lightning::quad {

struct QuadratureResult {
  Complex value{0.0, 0.0};
  double est_error = 0.0;
  int evaluations = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-14;
  int max_evaluations = 2'000'000;
  // Panels narrower than this are accepted regardless of their error estimate.
  double min_width = 1e-15;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

// The fixed 15-point rule used by the adaptive integrator.
const GaussRule& gauss15();

using ComplexIntegrand = std::function<Complex(double)>;

// Adaptive composite Gauss-Legendre quadrature of f over [a, b].
//
// Each panel is integrated with the 15-point rule and compared against the
// sum over its two halves; panels whose discrepancy exceeds their share of the
// tolerance are bisected. `breakpoints` seeds the initial panel partition
// (points outside (a, b) are ignored). Throws QuadratureError carrying the
// partial sum if the evaluation budget is exhausted.
QuadratureResult integrate(const ComplexIntegrand& f, double a, double b,
                           const AdaptiveOptions& opts = {},
                           std::span<const double> breakpoints = {});

}  // namespace lightning::quad
