#include "lightning/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lightning/least_squares.hpp"

namespace lightning::lp {

Complex Target::operator()(Complex z) const {
  Complex v = has_log() ? kernels::ref_power_log(z, alpha) : kernels::ref_power(z, alpha);
  if (has_prefactor()) v *= g(z);
  return v;
}

// ---------------------------------------------------------------------------
// LPConfig

void LPConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("lp config: alpha must lie in (0, 1)");
  if (!(beta >= 0.0 && beta < 2.0)) throw Error("lp config: beta must lie in [0, 2)");
  if (!(sigma > 0.0)) throw Error("lp config: sigma must be positive");
  if (!(C > 0.0)) throw Error("lp config: C must be positive");
  if (N1 < 1) throw Error("lp config: N1 must be positive");
  if (N2 && *N2 < 0) throw Error("lp config: N2 must be non-negative");
  if ((target == TargetKind::prefactor_power || target == TargetKind::prefactor_power_log) && !g) {
    throw Error("lp config: prefactor target needs g");
  }
}

int LPConfig::N_t() const {
  const double k1 = kappa() + 1.0;
  return static_cast<int>(std::floor(N1 * k1 * k1 + 1e-9));
}

double LPConfig::T() const { return sigma * alpha * std::sqrt(double(N1)); }

int LPConfig::n2() const {
  if (N2) return *N2;
  return static_cast<int>(std::ceil(1.3 * N1 - 1e-12));
}

double LPConfig::eta() const { return sigma_opt(alpha, beta) / sigma; }

kernels::KernelConfig LPConfig::kernel() const {
  kernels::KernelConfig k;
  k.alpha = alpha;
  k.C = C;
  k.h = h();
  k.N_t = N_t();
  k.T_override = T();
  return k;
}

Target LPConfig::target_function() const { return Target{target, alpha, g}; }

double sigma_opt(double alpha, double beta) {
  return std::sqrt(2.0 * (2.0 - beta)) * kPi / std::sqrt(alpha);
}

// ---------------------------------------------------------------------------
// Poles and residues

std::vector<Complex> make_poles(const LPConfig& cfg) {
  cfg.validate();
  std::vector<Complex> p;
  const double root = std::sqrt(double(cfg.N1));
  for (int j = 1; j <= cfg.N1; ++j) {
    p.emplace_back(-cfg.C * std::exp(-cfg.sigma * (root - std::sqrt(double(j)))), 0.0);
  }
  return p;
}

std::vector<Complex> make_poles_from_nodes(const LPConfig& cfg) {
  cfg.validate();
  const auto k = cfg.kernel();
  std::vector<Complex> p;
  for (int j = 1; j <= cfg.N1; ++j) p.emplace_back(kernels::pole(k, j), 0.0);
  return p;
}

namespace {

bool log_family(TargetKind t) {
  return t == TargetKind::power_log || t == TargetKind::prefactor_power_log;
}

// Weight of node j in the trapezoid sum written as sum_j w_j z|p_j|^a/(z-p_j).
double node_weight(const LPConfig& cfg, const kernels::KernelConfig& k, int j) {
  const double s = std::sin(cfg.alpha * kPi);
  if (log_family(cfg.target)) {
    const double w1 = k.h * s / (2.0 * cfg.alpha * cfg.alpha * kPi);
    return w1 + kernels::log_second_weight(k) * std::sqrt(k.h / j);
  }
  return s / (2.0 * cfg.alpha * kPi) * std::sqrt(k.h / j);
}

std::vector<Complex> plain_residues(const LPConfig& cfg) {
  const auto k = cfg.kernel();
  const auto p = make_poles(cfg);
  std::vector<Complex> a;
  for (int j = 1; j <= cfg.N1; ++j) {
    const double pj = p[static_cast<std::size_t>(j - 1)].real();
    a.emplace_back(node_weight(cfg, k, j) * pj * std::pow(-pj, cfg.alpha), 0.0);
  }
  return a;
}

}  // namespace

std::vector<Complex> residues_power(const LPConfig& cfg) {
  LPConfig c = cfg;
  c.target = TargetKind::power;
  return plain_residues(c);
}

std::vector<Complex> residues_power_log(const LPConfig& cfg) {
  LPConfig c = cfg;
  c.target = TargetKind::power_log;
  return plain_residues(c);
}

Complex remainder(Complex z, const LPConfig& cfg) {
  const auto k = cfg.kernel();
  Complex sum{0.0, 0.0};
  for (int j = 1; j <= cfg.N1; ++j) {
    sum += node_weight(cfg, k, j) * std::pow(-kernels::pole(k, j), cfg.alpha);
  }
  for (int j = cfg.N1 + 1; j <= k.N_t; ++j) {
    sum += node_weight(cfg, k, j) * kernels::pole_term(z, kernels::pole(k, j), cfg.alpha);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Tail fit

std::vector<Complex> tail_fit_points(const geometry::SectorDomain& domain, int n) {
  domain.validate();
  std::vector<Complex> pts;
  const double R = domain.radius;
  const double phi = domain.half_angle();
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * R * (1.0 - std::cos(kPi * i / (n - 1)));
    pts.push_back(domain.from_local(std::polar(x, phi)));
    if (domain.beta > 0.0 && i > 0) pts.push_back(domain.from_local(std::polar(x, -phi)));
  }
  if (domain.beta > 0.0) {
    for (int i = 1; i < n; ++i) {
      pts.push_back(domain.from_local(std::polar(R, -phi + 2.0 * phi * i / n)));
    }
  }
  return pts;
}

namespace {

// Analytic part of the target that the polynomial tail must reproduce.
Complex tail_target(Complex z, const LPConfig& cfg, const std::vector<Complex>& poles,
                    const std::vector<Complex>& residues) {
  const Complex r2 = remainder(z, cfg);
  if (!cfg.g) return r2;
  if (cfg.target != TargetKind::prefactor_power && cfg.target != TargetKind::prefactor_power_log) {
    return r2;
  }
  // g(z) a_j/(z-p_j) = g(p_j) a_j/(z-p_j) + a_j (g(z)-g(p_j))/(z-p_j); the
  // second piece is analytic and joins the tail.
  const Complex gz = cfg.g(z);
  Complex sum = gz * r2;
  for (std::size_t j = 0; j < poles.size(); ++j) {
    sum += residues[j] * (gz - cfg.g(poles[j])) / (z - poles[j]);
  }
  return sum;
}

Complex horner(const std::vector<Complex>& c, Complex w) {
  Complex acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + *it;
  return acc;
}

struct PlainParts {
  std::vector<Complex> poles;
  std::vector<Complex> residues;
};

PlainParts plain_parts(const LPConfig& cfg) {
  PlainParts parts;
  parts.poles = make_poles(cfg);
  parts.residues = log_family(cfg.target) ? residues_power_log(cfg) : residues_power(cfg);
  return parts;
}

}  // namespace

TailFit fit_tail(const LPConfig& cfg, const geometry::SectorDomain& domain) {
  cfg.validate();
  domain.validate();
  const int degree = cfg.n2();
  const auto parts = plain_parts(cfg);

  TailFit fit;
  fit.center = domain.apex;
  fit.scale = domain.radius;

  const int n = std::max(40, 2 * (degree + 1) + 20);
  const auto pts = tail_fit_points(domain, n);
  const auto rows = static_cast<Eigen::Index>(pts.size());
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  if (rows < cols) throw Error("increase sampling or reduce N2");

  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Complex z = pts[static_cast<std::size_t>(i)];
    const Complex w = (z - fit.center) / fit.scale;
    Complex pw{1.0, 0.0};
    for (Eigen::Index k = 0; k < cols; ++k) {
      A(i, k) = pw;
      pw *= w;
    }
    b(i) = tail_target(z, cfg, parts.poles, parts.residues);
  }
  const auto ls = linalg::solve_least_squares<Complex>(A, b);
  fit.coeffs.assign(ls.coeffs.data(), ls.coeffs.data() + ls.coeffs.size());
  fit.fit_rms = ls.residual_rms;
  fit.fit_max = ls.residual_max;
  fit.rank = ls.rank;

  const auto check = tail_fit_points(domain, 4 * n + 1);
  for (Complex z : check) {
    const Complex w = (z - fit.center) / fit.scale;
    const double e = std::abs(horner(fit.coeffs, w) - tail_target(z, cfg, parts.poles, parts.residues));
    fit.validation_sup = std::max(fit.validation_sup, e);
  }
  return fit;
}

RationalApprox build_lp(const LPConfig& cfg, const geometry::SectorDomain& domain) {
  cfg.validate();
  if (std::abs(cfg.beta - domain.beta) > 1e-14) {
    throw Error("build_lp: config and domain disagree on beta");
  }
  const auto parts = plain_parts(cfg);
  RationalApprox r;
  r.poles = parts.poles;
  r.residues = parts.residues;
  if (cfg.g && (cfg.target == TargetKind::prefactor_power ||
                cfg.target == TargetKind::prefactor_power_log)) {
    for (std::size_t j = 0; j < r.poles.size(); ++j) r.residues[j] *= cfg.g(r.poles[j]);
  }
  const auto fit = fit_tail(cfg, domain);
  r.tail = fit.coeffs;
  r.scale = fit.scale;
  r.center = fit.center;
  return r;
}

Complex eval(const RationalApprox& approx, Complex z) {
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < approx.poles.size(); ++j) {
    const Complex d = z - approx.poles[j];
    if (std::abs(d) < 1e-14 * std::abs(approx.poles[j])) {
      throw Error("pole collision");
    }
    sum += approx.residues[j] / d;
  }
  return sum + horner(approx.tail, (z - approx.center) / approx.scale);
}

// ---------------------------------------------------------------------------
// Text record

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_approx(std::ostream& out, const RationalApprox& approx) {
  for (Complex p : approx.poles) out << "pole " << num(p.real()) << ' ' << num(p.imag()) << '\n';
  for (Complex a : approx.residues) {
    out << "residue " << num(a.real()) << ' ' << num(a.imag()) << '\n';
  }
  out << "tail";
  for (Complex c : approx.tail) out << ' ' << num(c.real()) << ' ' << num(c.imag());
  out << '\n';
  out << "scale " << num(approx.scale) << '\n';
  out << "center " << num(approx.center.real()) << ' ' << num(approx.center.imag()) << '\n';
}

RationalApprox read_approx(std::istream& in) {
  RationalApprox r;
  std::string line;
  bool tail_seen = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    auto read_pair = [&](const char* what) {
      std::string re;
      std::string im;
      if (!(ls >> re >> im)) throw Error(std::string("approx record: malformed ") + what);
      return Complex(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr));
    };
    if (key == "pole") {
      r.poles.push_back(read_pair("pole"));
    } else if (key == "residue") {
      r.residues.push_back(read_pair("residue"));
    } else if (key == "tail") {
      tail_seen = true;
      std::string re;
      std::string im;
      while (ls >> re) {
        if (!(ls >> im)) throw Error("approx record: odd tail entry count");
        r.tail.emplace_back(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr));
      }
    } else if (key == "scale") {
      std::string s;
      if (!(ls >> s)) throw Error("approx record: malformed scale");
      r.scale = std::strtod(s.c_str(), nullptr);
    } else if (key == "center") {
      r.center = read_pair("center");
    } else if (key == "corner" || key == "#") {
      continue;
    } else {
      throw Error("approx record: unknown line '" + key + "'");
    }
  }
  if (r.poles.size() != r.residues.size()) throw Error("approx record: pole/residue count mismatch");
  if (!tail_seen) throw Error("approx record: missing tail");
  return r;
}

}  // namespace lightning::lp
