#include "lightning/corners.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lightning/least_squares.hpp"
#include "lightning/parallel.hpp"

namespace lightning::corners {

int CornerBasis::pole_count() const {
  int n = 0;
  for (const auto& c : corners) n += static_cast<int>(c.poles.size());
  return n;
}

int CornerBasis::columns() const { return 2 * pole_count() + 2 * N2 + 1; }

double corner_sigma(double alpha, double beta) {
  return std::sqrt(2.0 * (2.0 - beta)) * kPi / std::sqrt(alpha);
}

double global_sigma(const std::vector<double>& alphas, const std::vector<double>& betas) {
  if (alphas.empty() || alphas.size() != betas.size()) throw Error("global_sigma: bad input");
  return corner_sigma(*std::min_element(alphas.begin(), alphas.end()),
                      *std::max_element(betas.begin(), betas.end()));
}

CornerBasis plan_basis(const geometry::Polygon& polygon, int N, SigmaChoice sigma,
                       const PlanOptions& options) {
  const std::size_t m = polygon.size();
  if (N < 4 * static_cast<int>(m)) throw Error("plan_basis: need N >= 4 per corner");
  const auto betas = geometry::interior_angles(polygon);
  for (double b : betas) {
    if (b >= 2.0 - 1e-8 || b <= 0.0) throw Error("unsupported angle");
  }
  std::vector<double> alphas(m);
  for (std::size_t k = 0; k < m; ++k) alphas[k] = geometry::corner_alpha(polygon, k, betas);

  std::vector<double> w = options.weights.empty() ? betas : options.weights;
  if (w.size() != m) throw Error("plan_basis: one weight per corner required");
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(wsum > 0.0)) throw Error("plan_basis: weights must be positive");

  const double orientation = polygon.signed_area() >= 0.0 ? 1.0 : -1.0;
  double sig_global = 0.0;
  if (sigma.mode == SigmaMode::global_opt) sig_global = global_sigma(alphas, betas);
  if (sigma.mode == SigmaMode::fixed) {
    if (!(sigma.value > 0.0)) throw Error("plan_basis: fixed sigma must be positive");
    sig_global = sigma.value;
  }

  CornerBasis basis;
  for (std::size_t k = 0; k < m; ++k) {
    CornerPoles c;
    c.vertex = polygon.vertex(k);
    c.beta = betas[k];
    c.alpha = alphas[k];
    c.log_type = geometry::corner_is_log_type(c.beta);
    c.sigma = sigma.mode == SigmaMode::per_corner ? corner_sigma(c.alpha, c.beta) : sig_global;
    c.n = std::max(1, static_cast<int>(std::lround(N * w[k] / wsum)));
    c.length = 0.5 * std::min(polygon.edge_length(k), polygon.edge_length((k + m - 1) % m));
    const Complex t_out = polygon.edge_tangent(k, 0.0);
    const Complex interior =
        t_out / std::abs(t_out) * std::polar(1.0, orientation * c.beta * kPi / 2.0);
    c.direction = -interior;
    const double root = std::sqrt(double(c.n));
    // Poles closer than the floating-point resolution at the vertex would
    // coincide with it; the tapered sequence starts after them.
    const double resolution = 1e-14 * std::max(1.0, std::abs(c.vertex));
    for (int j = 1; j <= c.n; ++j) {
      const double d = c.length * std::exp(-c.sigma * (root - std::sqrt(double(j))));
      if (d < resolution) {
        c.first = j + 1;
        continue;
      }
      c.poles.push_back(c.vertex + c.direction * d);
    }
    basis.corners.push_back(std::move(c));
  }
  basis.N2 = options.N2 ? *options.N2 : (N + 1) / 2;
  if (basis.N2 < 0) throw Error("plan_basis: N2 must be non-negative");
  basis.center = polygon.centroid();
  for (Complex v : polygon.vertices()) basis.scale = std::max(basis.scale, std::abs(v - basis.center));
  return basis;
}

namespace {

// Fills one row of real basis values at z.
void basis_row(const CornerBasis& basis, Complex z, double* row) {
  int col = 0;
  for (const auto& c : basis.corners) {
    for (Complex p : c.poles) {
      const Complex g = std::abs(p - c.vertex) / (z - p);
      row[col++] = g.real();
      row[col++] = g.imag();
    }
  }
  const Complex w = (z - basis.center) / basis.scale;
  Complex pw{1.0, 0.0};
  row[col++] = 1.0;
  for (int m = 1; m <= basis.N2; ++m) {
    pw *= w;
    row[col++] = pw.real();
    row[col++] = pw.imag();
  }
}

}  // namespace

Complex HarmonicSolution::eval_analytic(Complex z) const {
  Complex sum{0.0, 0.0};
  int col = 0;
  for (const auto& c : basis.corners) {
    for (Complex p : c.poles) {
      const Complex a(coeffs(col), -coeffs(col + 1));
      sum += a * std::abs(p - c.vertex) / (z - p);
      col += 2;
    }
  }
  const Complex w = (z - basis.center) / basis.scale;
  Complex tail{0.0, 0.0};
  for (int m = basis.N2; m >= 1; --m) {
    const int at = col + 2 * m - 1;
    tail = tail * w + Complex(coeffs(at), -coeffs(at + 1));
  }
  tail = tail * w + coeffs(col);
  return sum + tail;
}

double HarmonicSolution::eval(Complex z) const { return eval_analytic(z).real(); }

HarmonicSolution solve_dirichlet(const geometry::Polygon& polygon, const BoundaryData& data,
                                 const CornerBasis& basis, const CollocationOptions& options) {
  const int cols = basis.columns();
  const int m = static_cast<int>(polygon.size());
  double cluster_sigma = 0.0;
  int max_n = 0;
  for (const auto& c : basis.corners) {
    cluster_sigma = std::max(cluster_sigma, c.sigma);
    max_n = std::max(max_n, c.n);
  }
  // Tapered samples reach just past the innermost pole; equispaced ones
  // resolve the polynomial part along the edges.
  const int per_corner = options.per_corner > 0 ? options.per_corner : std::max(8, max_n + 4);
  int uniform = options.uniform_per_edge;
  if (uniform < 0) {
    uniform = std::max(2 * basis.N2 + 10, (3 * cols + m - 1) / m - 2 * per_corner + 2);
  }
  const auto grid = geometry::boundary_samples(polygon, per_corner, cluster_sigma, uniform);
  const auto rows = static_cast<Eigen::Index>(grid.size());
  if (rows < 3 * cols) throw Error("solve_dirichlet: fewer than 3 samples per unknown");

  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  std::vector<double> weights(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    std::vector<double> row(static_cast<std::size_t>(cols));
    basis_row(basis, grid.points[i], row.data());
    for (int j = 0; j < cols; ++j) A(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
    b(static_cast<Eigen::Index>(i)) = data(grid.points[i]);
    weights[i] = std::sqrt(grid.weights[i]);
  });

  const auto ls = linalg::solve_least_squares<double>(A, b, weights);
  HarmonicSolution sol;
  sol.basis = basis;
  sol.coeffs = ls.coeffs;
  sol.residual_norm = ls.residual_rms;
  sol.residual_max = ls.residual_max;
  sol.rank = ls.rank;
  sol.collocation_points = static_cast<int>(rows);
  sol.per_corner = per_corner;
  sol.uniform_per_edge = uniform;
  sol.cluster_sigma = cluster_sigma;
  if (!std::isfinite(sol.residual_norm) || sol.rank < cols / 4) {
    throw Error("ill-conditioned basis: residual " + std::to_string(sol.residual_norm));
  }
  return sol;
}

double boundary_error(const HarmonicSolution& sol, const geometry::Polygon& polygon,
                      const BoundaryData& data, int fine_factor) {
  if (fine_factor < 4) throw Error("boundary_error: fine_factor must be at least 4");
  const auto coarse = geometry::boundary_samples(polygon, sol.per_corner, sol.cluster_sigma,
                                                 sol.uniform_per_edge);
  const auto fine = geometry::refine_boundary(coarse, polygon, fine_factor);
  std::vector<double> err(fine.size());
  parallel_for(fine.size(), [&](std::size_t i) {
    err[i] = std::abs(sol.eval(fine.points[i]) - data(fine.points[i]));
  });
  return err.empty() ? 0.0 : *std::max_element(err.begin(), err.end());
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_solution(std::ostream& out, const HarmonicSolution& sol) {
  int col = 0;
  const auto& basis = sol.basis;
  for (std::size_t k = 0; k < basis.corners.size(); ++k) {
    const auto& c = basis.corners[k];
    out << "corner " << k + 1 << '\n';
    for (Complex p : c.poles) out << "pole " << num(p.real()) << ' ' << num(p.imag()) << '\n';
    for (Complex p : c.poles) {
      const Complex a = Complex(sol.coeffs(col), -sol.coeffs(col + 1)) * std::abs(p - c.vertex);
      out << "residue " << num(a.real()) << ' ' << num(a.imag()) << '\n';
      col += 2;
    }
  }
  out << "tail " << num(sol.coeffs(col)) << ' ' << num(0.0);
  for (int m = 1; m <= basis.N2; ++m) {
    const int at = col + 2 * m - 1;
    out << ' ' << num(sol.coeffs(at)) << ' ' << num(-sol.coeffs(at + 1));
  }
  out << '\n';
  out << "scale " << num(basis.scale) << '\n';
  out << "center " << num(basis.center.real()) << ' ' << num(basis.center.imag()) << '\n';
}

BoundaryData builtin_data(const std::string& name) {
  if (name == "re2") return [](Complex z) { return z.real() * z.real(); };
  if (name == "rez") return [](Complex z) { return z.real(); };
  if (name == "const1") return [](Complex) { return 1.0; };
  throw Error("unknown boundary data '" + name + "'");
}

// ---------------------------------------------------------------------------
// Slit integrals

void SlitIntegralSpec::validate() const {
  if (k < 0) throw Error("slit integral: k must be non-negative");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("slit integral: alpha must lie in (0, 1)");
  if (!(W > 0.0)) throw Error("slit integral: W must be positive");
}

Complex branch_log(Complex z, Branch branch) {
  double theta = std::arg(z);
  if (branch == Branch::slit_positive_axis && theta > 0.0) theta -= 2.0 * kPi;
  return {std::log(std::abs(z)), theta};
}

Complex branch_power(Complex z, double s, Branch branch) {
  if (z == Complex(0.0, 0.0)) return {0.0, 0.0};
  return std::exp(s * branch_log(z, branch));
}

Complex P0(double alpha) {
  return {-kPi / std::tan(alpha * kPi), -kPi};
}

Complex P1(double alpha, Complex logz) {
  const double s = std::sin(alpha * kPi);
  return -Complex(kPi / std::tan(alpha * kPi), kPi) * logz + kPi * kPi / (s * s);
}

quad::QuadratureResult cauchy_slit_integral(const SlitIntegralSpec& spec, Complex z) {
  spec.validate();
  const double a = spec.k + spec.alpha;
  const double W = spec.W;
  if (z == Complex(0.0, 0.0) && !spec.with_log) {
    return {Complex(std::pow(W, a) / a, 0.0), 0.0, 1};
  }
  const double xr = std::clamp(z.real(), 0.0, W);
  const double dist = std::abs(z - xr);
  if (dist < 1e-10) throw Error("too close to slit");

  // zeta = x0 e^{-u} makes the endpoint behaviour at zeta = 0 smooth. The
  // anchor x0 = Re z (when it lies over the slit) lets zeta - z be formed with
  // expm1 instead of a cancelling difference near the peak.
  const bool over = z.real() > 0.0 && z.real() < W;
  const double x0 = over ? z.real() : W;
  const double u_lo = std::log(x0 / W);
  const double logx0 = std::log(x0);
  auto f = [&](double u) -> Complex {
    const double zeta = x0 * std::exp(-u);
    const Complex diff = Complex(x0 - z.real() + x0 * std::expm1(-u), -z.imag());
    Complex v = std::pow(zeta, a + 1.0) / diff;
    if (spec.with_log) v *= logx0 - u;
    return v;
  };
  // Truncate where the discarded piece of [0, zeta_min] is negligible.
  double u_max = u_lo + 1.0;
  for (;; u_max += 1.0) {
    const double zmin = x0 * std::exp(-u_max);
    const double logf = spec.with_log ? 1.0 + std::abs(logx0 - u_max) : 1.0;
    if (std::pow(zmin, a + 1.0) * logf / ((a + 1.0) * dist) < 1e-16) break;
  }
  std::vector<double> cuts;
  if (over) {
    cuts.push_back(0.0);
    for (double d : {1.0, 10.0, 100.0}) {
      const double off = d * dist / x0;
      cuts.push_back(-off);
      cuts.push_back(off);
    }
  }
  quad::AdaptiveOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-14;
  return quad::integrate(f, u_lo, u_max, opts, cuts);
}

SingularCheck singular_coefficient_check(int k, double alpha, double W) {
  SlitIntegralSpec spec;
  spec.k = k;
  spec.alpha = alpha;
  spec.W = W;
  const double a = k + alpha;
  if (std::abs(a - std::round(a)) < 1e-12) throw Error("singular check: k + alpha is an integer");
  const double x = 0.25 * W;
  const std::array<double, 3> eps{1e-3, 1e-4, 1e-5};

  auto extrapolated_jump = [&](bool with_log) {
    spec.with_log = with_log;
    std::array<Complex, 3> J;
    for (std::size_t i = 0; i < 3; ++i) {
      J[i] = cauchy_slit_integral(spec, Complex(x, eps[i])).value -
             cauchy_slit_integral(spec, Complex(x, -eps[i])).value;
    }
    // Quadratic in eps through the three samples, evaluated at eps = 0.
    const double e0 = eps[0], e1 = eps[1], e2 = eps[2];
    const double l0 = e1 * e2 / ((e0 - e1) * (e0 - e2));
    const double l1 = e0 * e2 / ((e1 - e0) * (e1 - e2));
    const double l2 = e0 * e1 / ((e2 - e0) * (e2 - e1));
    return l0 * J[0] + l1 * J[1] + l2 * J[2];
  };

  SingularCheck out;
  out.jump = extrapolated_jump(false);
  out.jump_log = extrapolated_jump(true);

  // Limits of z^a and log z from above (arg -> -2 pi) and below (arg -> 0).
  const double xa = std::pow(x, a);
  const Complex pow_above = xa * std::polar(1.0, -2.0 * kPi * a);
  const Complex log_above(std::log(x), -2.0 * kPi);
  const Complex log_below(std::log(x), 0.0);
  const Complex model = (pow_above - xa) * P0(alpha);
  const Complex model_log = pow_above * P1(alpha, log_above) - xa * P1(alpha, log_below);
  out.P0_err = std::abs(out.jump - model) / xa;
  out.P1_err = std::abs(out.jump_log - model_log) / xa;
  return out;
}

Complex segment_cauchy_integral(const std::function<Complex(Complex)>& f, Complex a, Complex b,
                                Complex z, double tol) {
  const Complex d = b - a;
  auto g = [&](double t) {
    const Complex zeta = a + t * d;
    return f(zeta) * d / (zeta - z);
  };
  quad::AdaptiveOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  return quad::integrate(g, 0.0, 1.0, opts).value / Complex(0.0, 2.0 * kPi);
}

}  // namespace lightning::corners
