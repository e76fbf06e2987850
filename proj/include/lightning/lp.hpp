#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lightning/common.hpp"
#include "lightning/geometry.hpp"
#include "lightning/kernels.hpp"

namespace lightning::lp {

enum class TargetKind { power, power_log, prefactor_power, prefactor_power_log };

using Prefactor = std::function<Complex(Complex)>;

// The function being approximated: z^alpha, z^alpha log z, or either one
// multiplied by an analytic prefactor g.
struct Target {
  TargetKind kind = TargetKind::power;
  double alpha = 0.5;
  Prefactor g;

  bool has_log() const {
    return kind == TargetKind::power_log || kind == TargetKind::prefactor_power_log;
  }
  bool has_prefactor() const {
    return kind == TargetKind::prefactor_power || kind == TargetKind::prefactor_power_log;
  }
  Complex operator()(Complex z) const;
};

struct LPConfig {
  double alpha = 0.5;
  double beta = 0.0;
  double sigma = 1.0;
  double C = 1.0;
  int N1 = 1;
  std::optional<int> N2;  // default ceil(1.3 N1)
  TargetKind target = TargetKind::power;
  Prefactor g;            // prefactor targets only

  void validate() const;
  double h() const { return sigma * sigma * alpha * alpha; }
  double kappa() const { return alpha / (1.0 - alpha); }
  // Largest N_t with ceil(N_t / (kappa+1)^2) == N1.
  int N_t() const;
  // sigma * alpha * sqrt(N1); makes the first N1 trapezoid nodes equal the
  // tapered poles -C e^{-sigma(sqrt(N1) - sqrt(j))}.
  double T() const;
  int n2() const;
  double eta() const;
  kernels::KernelConfig kernel() const;
  Target target_function() const;
};

// Partial fractions plus a polynomial tail in w = (z - center)/scale.
struct RationalApprox {
  std::vector<Complex> poles;
  std::vector<Complex> residues;
  std::vector<Complex> tail;
  double scale = 1.0;
  Complex center{0.0, 0.0};
};

double sigma_opt(double alpha, double beta);

// Tapered poles -C e^{-sigma(sqrt(N1) - sqrt(j))}, j = 1..N1.
std::vector<Complex> make_poles(const LPConfig& cfg);
// The same poles from the trapezoid-node formula -C e^{(sqrt(jh) - T)/alpha}.
std::vector<Complex> make_poles_from_nodes(const LPConfig& cfg);

std::vector<Complex> residues_power(const LPConfig& cfg);
std::vector<Complex> residues_power_log(const LPConfig& cfg);

// Analytic remainder r_2 (far nodes plus constant sums) for the plain targets.
Complex remainder(Complex z, const LPConfig& cfg);

struct TailFit {
  std::vector<Complex> coeffs;
  double scale = 1.0;
  Complex center{0.0, 0.0};
  double fit_rms = 0.0;
  double fit_max = 0.0;
  double validation_sup = 0.0;
  int rank = 0;
};

// Boundary points of the sector used for the tail fit (n points per ray and
// on the arc, Chebyshev-clustered along the rays).
std::vector<Complex> tail_fit_points(const geometry::SectorDomain& domain, int n);

// Least-squares polynomial of degree N2 for the analytic part of the target.
TailFit fit_tail(const LPConfig& cfg, const geometry::SectorDomain& domain);

RationalApprox build_lp(const LPConfig& cfg, const geometry::SectorDomain& domain);

Complex eval(const RationalApprox& approx, Complex z);

// Text record: "pole re im", "residue re im", "tail re0 im0 re1 im1 ...",
// "scale s", "center re im"; all numbers in 17 significant digits.
void write_approx(std::ostream& out, const RationalApprox& approx);
RationalApprox read_approx(std::istream& in);

}  // namespace lightning::lp
