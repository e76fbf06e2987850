#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lightning/analysis.hpp"
#include "lightning/lp.hpp"
#include "oracles.hpp"

using namespace lightning;
using namespace lightning::lp;

namespace {

constexpr double pi = std::numbers::pi;

LPConfig make(double alpha, double beta, double sigma, int N1, double C = 1.0) {
  LPConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.sigma = sigma;
  c.N1 = N1;
  c.C = C;
  return c;
}

double sup_on_interval(const RationalApprox& r, double alpha) {
  double e = 0.0;
  for (int m = 0; m <= 400; ++m) {
    const double x = std::pow(10.0, -14.0 * m / 400.0);
    e = std::max(e, std::abs(eval(r, x) - std::pow(x, alpha)));
  }
  return e;
}

}  // namespace

TEST_CASE("sigma_opt values") {
  CHECK(sigma_opt(0.25, 0.0) == doctest::Approx(4.0 * pi).epsilon(1e-15));
  CHECK(sigma_opt(0.5, 1.0) == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(sigma_opt(0.5, 0.0) == doctest::Approx(2.0 * std::sqrt(2.0) * pi).epsilon(1e-15));
}

TEST_CASE("tapered poles") {
  const auto p = make_poles(make(0.5, 0.0, 2.0, 4));
  REQUIRE(p.size() == 4);
  CHECK(p[3] == Complex(-1.0, 0.0));
  CHECK(p[0].real() == doctest::Approx(-std::exp(-2.0)).epsilon(1e-15));
  CHECK(p[0].real() == doctest::Approx(-0.13534).epsilon(1e-4));
  const auto single = make_poles(make(0.5, 0.0, 3.0, 1, 0.5));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == Complex(-0.5, 0.0));
}

TEST_CASE("RationalApprox pole ordering and count") {
  const auto r = build_lp(make(0.5, 1.0, sigma_opt(0.5, 1.0), 25), geometry::SectorDomain{1.0});
  REQUIRE(r.poles.size() == 25);
  REQUIRE(r.residues.size() == 25);
  // p_1 is nearest the origin; magnitudes grow with j up to p_{N1} = -C.
  for (std::size_t j = 0; j < r.poles.size(); ++j) {
    CHECK(r.poles[j].imag() == 0.0);
    CHECK(r.poles[j].real() < 0.0);
    if (j > 0) CHECK(r.poles[j].real() < r.poles[j - 1].real());
    CHECK(std::isfinite(std::abs(r.residues[j])));
  }
  CHECK(r.poles.back() == Complex(-1.0, 0.0));
}

TEST_CASE("pole formula equivalence over random configs") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> ua(0.05, 0.95), ub(0.0, 1.9), us(0.5, 15.0), uc(0.1, 5.0);
  std::uniform_int_distribution<int> un(1, 80);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cfg = make(ua(rng), ub(rng), us(rng), un(rng), uc(rng));
    const auto a = make_poles(cfg);
    const auto b = make_poles_from_nodes(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) / std::abs(a[j]) <= 1e-13);
  }
}

TEST_CASE("poles scale with C") {
  for (double lambda : {0.3, 2.0, 7.5}) {
    const auto a = make_poles(make(0.4, 1.0, 5.0, 30));
    const auto b = make_poles(make(0.4, 1.0, 5.0, 30, lambda));
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(std::abs(b[j] - lambda * a[j]) <= 1e-15 * std::abs(b[j]));
    }
  }
}

TEST_CASE("residues_power") {
  const auto cfg = make(0.5, 0.0, 2.0, 4);
  const auto a = residues_power(cfg);
  CHECK(a[3].real() == doctest::Approx(-1.0 / (2.0 * pi)).epsilon(1e-15));
  CHECK(a[3].real() == doctest::Approx(-0.15915).epsilon(1e-4));
  for (const auto& c : {cfg, make(0.2, 1.5, 9.0, 50, 3.0), make(0.9, 0.3, 1.0, 7)}) {
    for (Complex r : residues_power(c)) {
      CHECK(r.real() < 0.0);
      CHECK(r.imag() == 0.0);
    }
  }
  const auto a1 = residues_power(make(0.3, 1.0, 4.0, 12, 1.0));
  const auto a2 = residues_power(make(0.3, 1.0, 4.0, 12, 2.0));
  for (std::size_t j = 0; j < a1.size(); ++j) {
    CHECK(a2[j].real() == doctest::Approx(std::pow(2.0, 1.3) * a1[j].real()).epsilon(1e-14));
  }
}

TEST_CASE("residues_power_log, two poles by hand") {
  auto cfg = make(0.5, 1.0, 3.0, 2);
  const double h = cfg.h();
  const double T = cfg.T();
  const auto got = residues_power_log(cfg);
  REQUIRE(got.size() == 2);
  for (int j = 1; j <= 2; ++j) {
    const double p = -std::exp(-3.0 * (std::sqrt(2.0) - std::sqrt(double(j))));
    // sin(pi/2) = 1, alpha^2 = 1/4, chi(0.5, 1) = 0.
    const double w = h / (2.0 * 0.25 * pi) - 0.5 * T / (0.25 * pi) * std::sqrt(h / j);
    CHECK(got[j - 1].real() == doctest::Approx(w * p * std::sqrt(-p)).epsilon(1e-14));
    CHECK(got[j - 1].imag() == 0.0);
  }
  cfg.C = 2.5;
  cfg.alpha = 0.3;
  for (Complex r : residues_power_log(cfg)) CHECK(r.imag() == 0.0);
}

TEST_CASE("fit_tail quality") {
  const auto cfg = make(0.5, 1.0, sigma_opt(0.5, 1.0), 36);
  const geometry::SectorDomain d{1.0};
  const auto fit = fit_tail(cfg, d);
  CHECK(fit.coeffs.size() == static_cast<std::size_t>(cfg.n2() + 1));
  CHECK(fit.validation_sup <= 1e-10);
  CHECK(fit.validation_sup <= 50.0 * std::max(fit.fit_rms, 1e-16) + 1e-13);

  // Misfit decreases (within 10x noise) as the degree grows.
  auto c = make(0.5, 1.0, sigma_opt(0.5, 1.0), 16);
  double prev = INFINITY;
  for (int n2 : {2, 4, 8, 12, 16, 21}) {
    c.N2 = n2;
    const double v = fit_tail(c, d).validation_sup;
    CHECK(v <= 10.0 * prev);
    prev = v;
  }
}

TEST_CASE("smallest instance is evaluable") {
  auto cfg = make(0.5, 0.0, 3.0, 1);
  cfg.N2 = 0;
  const auto r = build_lp(cfg, geometry::SectorDomain{0.0});
  CHECK(r.poles.size() == 1);
  CHECK(r.poles[0] == Complex(-1.0, 0.0));
  CHECK(r.residues.size() == 1);
  CHECK(r.tail.size() == 1);
  CHECK(std::isfinite(std::abs(eval(r, 0.5))));
}

TEST_CASE("build_lp agrees with the trapezoid sum up to the truncation level") {
  for (double beta : {0.0, 1.0}) {
    const auto cfg = make(0.5, beta, sigma_opt(0.5, beta), 16);
    const geometry::SectorDomain d{beta};
    const auto r = build_lp(cfg, d);
    const auto k = cfg.kernel();
    double e = 0.0;
    for (Complex z : geometry::sample_sector(d, 30, 8, 0.5).points) {
      e = std::max(e, std::abs(eval(r, z) - kernels::trapezoid_r(z, k)));
    }
    CHECK(e <= 100.0 * std::exp(-cfg.T()));
  }
  CHECK_THROWS(build_lp(make(0.5, 1.0, 2.0, 4), geometry::SectorDomain{0.5}));
}

TEST_CASE("interval accuracy at N1 = 16") {
  const auto cfg = make(0.5, 0.0, sigma_opt(0.5, 0.0), 16);
  const double e = sup_on_interval(build_lp(cfg, geometry::SectorDomain{0.0}), 0.5);
  const double rate = std::exp(-2.0 * pi * std::sqrt(0.5 * 16));
  CHECK(rate == doctest::Approx(1.9e-8).epsilon(0.05));
  CHECK(e <= 100.0 * rate);
  CHECK(e >= rate / 100.0);
}

TEST_CASE("prefactor modes") {
  auto base = make(0.5, 1.0, sigma_opt(0.5, 1.0), 16);
  const geometry::SectorDomain d{1.0};
  const auto plain = build_lp(base, d);
  auto one = base;
  one.target = TargetKind::prefactor_power;
  one.g = [](Complex) { return Complex(1.0, 0.0); };
  const auto r1 = build_lp(one, d);
  for (std::size_t j = 0; j < plain.residues.size(); ++j) CHECK(std::abs(r1.residues[j] - plain.residues[j]) <= 1e-13 * std::abs(plain.residues[j]));
  for (std::size_t j = 0; j < plain.tail.size(); ++j) CHECK(std::abs(r1.tail[j] - plain.tail[j]) <= 1e-13 * std::max(1.0, std::abs(plain.tail[j])));

  auto ex = base;
  ex.target = TargetKind::prefactor_power;
  ex.g = [](Complex z) { return std::exp(z); };
  const auto re = build_lp(ex, d);
  const auto grid = geometry::sample_sector(d, 40, 8, 0.5);
  const double e_plain = analysis::sup_error(plain, base.target_function(), d, grid).value;
  const double e_pref = analysis::sup_error(re, ex.target_function(), d, grid).value;
  CHECK(e_pref <= 10.0 * e_plain * std::exp(1.0));

  auto missing = base;
  missing.target = TargetKind::prefactor_power;
  CHECK_THROWS(missing.validate());
}

TEST_CASE("eval basics") {
  RationalApprox r;
  r.poles = {-1.0};
  r.residues = {1.0};
  r.tail = {};
  CHECK(eval(r, 0.0) == Complex(1.0, 0.0));
  RationalApprox t;
  t.tail = {2.0, 3.0};
  CHECK(eval(t, 2.0) == Complex(8.0, 0.0));
  const auto a = build_lp(make(0.5, 1.0, 6.0, 9), geometry::SectorDomain{1.0});
  const Complex z(0.3, 0.4);
  CHECK(std::abs(eval(a, std::conj(z)) - std::conj(eval(a, z))) <= 1e-14);
  CHECK_THROWS_WITH(eval(a, a.poles[2]), "pole collision");
}

TEST_CASE("text record round trip is bit exact") {
  auto cfg = make(0.3, 1.2, 5.0, 12);
  cfg.target = TargetKind::power_log;
  const auto r = build_lp(cfg, geometry::SectorDomain{1.2});
  std::stringstream ss;
  write_approx(ss, r);
  const auto back = read_approx(ss);
  CHECK(back.poles == r.poles);
  CHECK(back.residues == r.residues);
  CHECK(back.tail == r.tail);
  CHECK(back.scale == r.scale);
  CHECK(back.center == r.center);
  std::istringstream bad("pole 1 0\nbogus 3\n");
  CHECK_THROWS(read_approx(bad));
}

TEST_CASE("config validation and derived quantities") {
  CHECK_THROWS(make(0.0, 0.0, 1.0, 4).validate());
  CHECK_THROWS(make(0.5, 2.0, 1.0, 4).validate());
  CHECK_THROWS(make(0.5, 0.0, -1.0, 4).validate());
  CHECK_THROWS(make(0.5, 0.0, 1.0, 0).validate());
  auto c = make(0.5, 1.0, 2.0, 10);
  CHECK(c.h() == doctest::Approx(1.0));
  CHECK(c.n2() == 13);
  CHECK(c.eta() == doctest::Approx(pi));
  // N1 = ceil(N_t/(kappa+1)^2) holds for the stored N_t.
  for (double a : {0.2, 0.5, 0.7}) {
    for (int n : {1, 5, 17, 64}) {
      auto d = make(a, 1.0, 3.0, n);
      const double k1 = d.kappa() + 1.0;
      CHECK(static_cast<int>(std::ceil(d.N_t() / (k1 * k1) - 1e-9)) == n);
    }
  }
}

TEST_CASE("root-exponential decay for every sigma") {
  for (double s : {2.0, 4.0, sigma_opt(0.5, 1.0), 12.0}) {
    std::vector<double> x, y;
    for (int n : {4, 9, 16, 25, 36}) {
      const auto cfg = make(0.5, 1.0, s, n);
      const auto r = build_lp(cfg, geometry::SectorDomain{1.0});
      const auto sup = analysis::refined_sup_error(r, cfg.target_function(), geometry::SectorDomain{1.0},
                                                   0.5 * std::abs(r.poles.front()));
      x.push_back(std::sqrt(double(n)));
      y.push_back(std::log(std::max(sup.value, 1e-16)));
    }
    CHECK(oracle::slope(x, y) < 0.0);
  }
}
