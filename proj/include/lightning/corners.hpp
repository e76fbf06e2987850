#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lightning/common.hpp"
#include "lightning/geometry.hpp"
#include "lightning/quadrature.hpp"

namespace lightning::corners {

enum class SigmaMode { global_opt, per_corner, fixed };

struct SigmaChoice {
  SigmaMode mode = SigmaMode::global_opt;
  double value = 0.0;  // fixed mode only
};

struct CornerPoles {
  Complex vertex;
  Complex direction;  // unit vector along the exterior bisector
  double beta = 1.0;
  double alpha = 1.0;
  bool log_type = false;
  double sigma = 1.0;
  double length = 1.0;  // L_k, distance of the outermost pole
  int n = 0;      // planned count
  int first = 1;  // index of the first pole kept; closer ones are unresolvable
  std::vector<Complex> poles;  // j = first..n
};

struct CornerBasis {
  std::vector<CornerPoles> corners;
  int N2 = 0;
  Complex center;
  double scale = 1.0;

  int pole_count() const;
  // Real unknowns: two per pole plus Re/Im of the monomials (no Im for m = 0).
  int columns() const;
};

struct PlanOptions {
  // Relative pole share per corner (empty: proportional to beta_k).
  std::vector<double> weights;
  // Polynomial degree; default ceil(N / 2).
  std::optional<int> N2;
};

// Lightning basis for a polygon with N poles in total. Throws
// "unsupported angle" when a corner is (numerically) a slit.
CornerBasis plan_basis(const geometry::Polygon& polygon, int N, SigmaChoice sigma,
                       const PlanOptions& options = {});

// sigma = sqrt(2(2 - beta)) pi / sqrt(alpha) (per-corner or global rule).
double corner_sigma(double alpha, double beta);
// Global rule with alpha = min alpha_k, beta = max beta_k.
double global_sigma(const std::vector<double>& alphas, const std::vector<double>& betas);

using BoundaryData = std::function<double(Complex)>;

struct HarmonicSolution {
  CornerBasis basis;
  Eigen::VectorXd coeffs;
  double residual_norm = 0.0;  // RMS boundary misfit on the collocation grid
  double residual_max = 0.0;
  int rank = 0;
  int collocation_points = 0;
  int per_corner = 0;
  int uniform_per_edge = 0;
  double cluster_sigma = 1.0;

  double eval(Complex z) const;
  // Analytic function whose real part is the solution.
  Complex eval_analytic(Complex z) const;
};

struct CollocationOptions {
  int per_corner = 0;         // tapered samples per corner; 0 = innermost pole count + 4
  int uniform_per_edge = -1;  // equispaced samples per edge; -1 = automatic
};

// Real least-squares fit of the boundary data over tapered boundary samples
// (weighted by the square root of the local spacing). Automatic settings give
// at least 3 samples per unknown.
HarmonicSolution solve_dirichlet(const geometry::Polygon& polygon, const BoundaryData& data,
                                 const CornerBasis& basis, const CollocationOptions& options = {});

// sup |u - data| over the collocation grid refined fine_factor times.
double boundary_error(const HarmonicSolution& sol, const geometry::Polygon& polygon,
                      const BoundaryData& data, int fine_factor = 4);

// Listing in the rational-approximation text format with "corner k" headers.
void write_solution(std::ostream& out, const HarmonicSolution& sol);

// Built-in boundary data by name: "re2" (Re z)^2, "rez" Re z, "const1".
BoundaryData builtin_data(const std::string& name);

// ---------------------------------------------------------------------------
// Cauchy integrals over the slit [0, W]

enum class Branch { principal, slit_positive_axis };

struct SlitIntegralSpec {
  int k = 0;
  double alpha = 0.5;
  double W = 1.0;
  Branch branch = Branch::slit_positive_axis;
  bool with_log = false;  // integrand zeta^{k+alpha} log zeta

  void validate() const;
};

// int_0^W zeta^{k+alpha} (log zeta) / (zeta - z) d zeta. Throws "too close to
// slit" within 1e-10 of [0, W]; z = 0 returns the limit W^{k+alpha}/(k+alpha)
// (plain integrand only).
quad::QuadratureResult cauchy_slit_integral(const SlitIntegralSpec& spec, Complex z);

// z^s on the chosen branch: principal (arg in (-pi, pi]) or cut along the
// positive axis (arg in (-2 pi, 0]).
Complex branch_power(Complex z, double s, Branch branch);
Complex branch_log(Complex z, Branch branch);

// Singular coefficients -pi cot(alpha pi) - i pi and
// -(pi cot(alpha pi) + i pi) log z + pi^2 csc^2(alpha pi).
Complex P0(double alpha);
Complex P1(double alpha, Complex logz);

struct SingularCheck {
  double P0_err = 0.0;
  double P1_err = 0.0;
  Complex jump;      // extrapolated jump of the plain integral
  Complex jump_log;  // and of the log integral
};

// Jump of the slit integrals across the slit at x = W/4, extrapolated from
// eps in {1e-3, 1e-4, 1e-5}, against the jump of z^{k+alpha} P0 (and
// z^{k+alpha} P1) on the positive-axis branch; errors relative to x^{k+alpha}.
SingularCheck singular_coefficient_check(int k, double alpha, double W);

// Cauchy integral (1/(2 pi i)) int_a^b f(zeta)/(zeta - z) d zeta over a segment.
Complex segment_cauchy_integral(const std::function<Complex(Complex)>& f, Complex a, Complex b,
                                Complex z, double tol = 1e-13);

}  // namespace lightning::corners
