#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lightning/geometry.hpp"
#include "lightning/kernels.hpp"
#include "oracles.hpp"

using namespace lightning;
using namespace lightning::kernels;

namespace {

constexpr double pi = std::numbers::pi;

KernelConfig make(double alpha, double C, double h, int Nt) {
  KernelConfig c;
  c.alpha = alpha;
  c.C = C;
  c.h = h;
  c.N_t = Nt;
  return c;
}

}  // namespace

TEST_CASE("ref_power principal branch") {
  CHECK(std::abs(ref_power(4.0, 0.5) - 2.0) <= 1e-15);
  CHECK(std::abs(ref_power({0.0, 1.0}, 0.5) - std::polar(1.0, pi / 4)) <= 1e-15);
  for (double a : {0.1, 0.5, 0.9}) CHECK(ref_power(1.0, a) == Complex(1.0, 0.0));
  CHECK(ref_power(0.0, 0.3) == Complex(0.0, 0.0));
  CHECK_THROWS_WITH(ref_power(-1.0, 0.5), "branch cut");
  CHECK(ref_power_log(0.0, 0.5) == Complex(0.0, 0.0));
}

TEST_CASE("identity residual examples") {
  CHECK(identity_residual(1.0, 0.5, 1e-12) <= 1e-10);
  CHECK(identity_residual(0.0, 0.5, 1e-12) == 0.0);
  CHECK(identity_residual(0.3 * std::polar(1.0, 0.75 * pi * 0.9), 0.7, 1e-12) <= 1e-10);
}

TEST_CASE("integral representation matches an independent trapezoid oracle") {
  for (double a : {0.25, 0.5, 0.8}) {
    for (Complex z : {Complex(0.7, 0.0), Complex(0.2, 0.5), std::polar(0.9, 0.7 * pi), Complex(1e-6, 1e-7)}) {
      const Complex q = power_integral(z, a, 1e-13).value;
      CHECK(std::abs(q - oracle::power_by_trapezoid(z, a)) <= 1e-12);
    }
  }
}

TEST_CASE("chi constant") {
  CHECK(std::abs(chi(0.5, 1.0)) <= 1e-15);
  CHECK(chi(0.25, 1.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  // 2 e^{1/2}/pi = 1.049608...
  CHECK(chi(0.5, std::exp(1.0)) == doctest::Approx(2.0 * std::exp(0.5) / pi).epsilon(1e-14));
  CHECK(chi(0.5, std::exp(1.0)) == doctest::Approx(1.049608).epsilon(1e-6));
}

TEST_CASE("I_of_z reference values") {
  const auto cfg = make(0.5, 1.0, pi * pi, 64);
  CHECK(I_of_z(0.0, cfg).value == Complex(0.0, 0.0));
  const auto r = I_of_z(1.0, cfg);
  CHECK(std::abs(r.value - 1.0) <= 3.0 * std::exp(-cfg.T()));
  CHECK(r.est_error <= 1e-13 * std::max(1.0, std::abs(r.value)));
  CHECK(r.evaluations > 0);
  const Complex z(0.3, 0.6);
  CHECK(std::abs(I_of_z(std::conj(z), cfg).value - std::conj(I_of_z(z, cfg).value)) <= 1e-13);
}

TEST_CASE("Ilog_of_z reference values") {
  const auto cfg64 = make(0.5, 1.0, pi * pi, 64);
  CHECK(Ilog_of_z(0.0, cfg64).value == Complex(0.0, 0.0));
  CHECK(std::abs(Ilog_of_z(1.0, cfg64).value) <= 3.0 * cfg64.T() * std::exp(-cfg64.T()));
  const auto cfg = make(0.5, 1.0, pi * pi, 100);
  const Complex v = Ilog_of_z(0.5, cfg).value;
  CHECK(std::sqrt(0.5) * std::log(0.5) == doctest::Approx(-0.49012).epsilon(1e-5));
  CHECK(std::abs(v - std::sqrt(0.5) * std::log(0.5)) <= 3.0 * cfg.T() * std::exp(-cfg.T()));
}

TEST_CASE("trapezoid sums") {
  const auto cfg = make(0.5, 1.0, pi * pi, 4);
  CHECK(trapezoid_r(0.0, cfg) == Complex(0.0, 0.0));
  CHECK(trapezoid_rlog(0.0, cfg) == Complex(0.0, 0.0));
  const Complex want = oracle::trapezoid_terms(1.0, 0.5, 1.0, pi * pi, 4, cfg.T());
  CHECK(std::abs(trapezoid_r(1.0, cfg) - want) <= 1e-15);
  for (int Nt : {7, 40}) {
    const auto c = make(0.3, 2.0, 1.7, Nt);
    for (Complex z : {Complex(0.4, 0.1), Complex(0.0, 0.9), std::polar(0.8, 2.5)}) {
      const Complex o = oracle::trapezoid_terms(z, 0.3, 2.0, 1.7, Nt, c.T());
      CHECK(std::abs(trapezoid_r(z, c) - o) <= 1e-14 * std::max(1.0, std::abs(o)));
    }
  }
  const Complex z(0.2, -0.4);
  for (const auto& c : {cfg, make(0.7, 0.5, 2.0, 30)}) {
    CHECK(std::abs(trapezoid_r(std::conj(z), c) - std::conj(trapezoid_r(z, c))) <= 1e-15);
    CHECK(std::abs(trapezoid_rlog(std::conj(z), c) - std::conj(trapezoid_rlog(z, c))) <= 1e-14);
  }
}

TEST_CASE("trapezoid log sum, small case by hand") {
  // Two nodes: both groups written out term by term.
  const double a = 0.5, C = 1.0, h = 2.0;
  const auto cfg = make(a, C, h, 2);
  const double T = cfg.T();
  const double s = std::sin(a * pi);
  const Complex z(0.3, 0.2);
  Complex want = 0.0;
  for (int j = 1; j <= 2; ++j) {
    const double p = -C * std::exp((std::sqrt(j * h) - T) / a);
    const double w1 = h * s / (2.0 * a * a * pi);
    const double w2 = 0.5 * (chi(a, C) / std::pow(C, a) - T * s / (a * a * pi)) * std::sqrt(h / j);
    want += (w1 + w2) * z * std::pow(-p, a) / (z - p);
  }
  Complex lib = 0.0;
  for (int j = 1; j <= 2; ++j) {
    const double p = pole(cfg, j);
    const double w1 = h * s / (2.0 * a * a * pi);
    const double w2 = log_second_weight(cfg) * std::sqrt(h / j);
    lib += (w1 + w2) * pole_term(z, p, a);
  }
  CHECK(std::abs(lib - want) <= 1e-15);
  CHECK(std::abs(trapezoid_rlog(z, cfg) - lib) <= 1e-14);
}

TEST_CASE("pole collision") {
  const auto cfg = make(0.5, 1.0, 1.0, 10);
  CHECK_THROWS_WITH(trapezoid_r(Complex(pole(cfg, 3), 0.0), cfg), "pole collision");
  CHECK_NOTHROW(trapezoid_r(Complex(pole(cfg, 3), 1e-9), cfg));
}

TEST_CASE("pole lattice") {
  const auto cfg = make(0.4, 1.5, 0.8, 25);
  const auto p = poles(cfg);
  REQUIRE(p.size() == 25);
  for (int j = 1; j <= 25; ++j) {
    CHECK(p[j - 1] == doctest::Approx(-1.5 * std::exp((std::sqrt(j * 0.8) - cfg.T()) / 0.4)).epsilon(1e-14));
    if (j > 1) CHECK(p[j - 1] < p[j - 2]);
  }
}

TEST_CASE("config validation and truncation condition") {
  CHECK_THROWS(make(1.0, 1.0, 1.0, 4).validate());
  CHECK_THROWS(make(0.5, 0.0, 1.0, 4).validate());
  CHECK_THROWS(make(0.5, 1.0, 0.0, 4).validate());
  CHECK_THROWS(make(0.5, 1.0, 1.0, 0).validate());
  CHECK(make(0.5, 1.0, pi * pi, 64).truncation_valid());
  CHECK_FALSE(make(0.5, 1.0, 0.01, 1).truncation_valid());
  const auto w = KernelConfig::with_T(0.5, 1.0, 2.0, 10.0);
  CHECK(w.T() == 10.0);
  CHECK(w.N_t == 200);
}

TEST_CASE("doubling N_t at fixed h does not increase the truncation error") {
  const double h = 0.5 * 0.5 * 4 * pi * pi;
  double prev = INFINITY;
  double prevT = 0.0;
  for (int Nt : {8, 16, 32, 64, 128}) {
    const auto cfg = make(0.5, 1.0, h, Nt);
    CHECK(cfg.T() > prevT);
    prevT = cfg.T();
    double err = 0.0;
    for (Complex z : {Complex(1.0, 0.0), Complex(0.0, 0.5), Complex(0.3, -0.2)}) {
      err = std::max(err, std::abs(I_of_z(z, cfg).value - ref_power(z, 0.5)));
    }
    CHECK(err <= 10.0 * prev);
    prev = std::max(err, 1e-15);
  }
}
