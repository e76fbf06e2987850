#include "lightning/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lightning::quad {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& gauss15() {
  static const GaussRule rule = gauss_legendre(15);
  return rule;
}

namespace {

struct PanelSum {
  Complex value;
  double magnitude;  // integral of |f|, the scale of rounding errors
};

PanelSum panel(const ComplexIntegrand& f, double a, double b, int& evals) {
  const auto& rule = gauss15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Complex sum{0.0, 0.0};
  double mag = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Complex v = f(mid + half * rule.nodes[i]);
    sum += rule.weights[i] * v;
    mag += rule.weights[i] * std::abs(v);
  }
  evals += static_cast<int>(rule.nodes.size());
  return {sum * half, mag * half};
}

struct Panel {
  double a;
  double b;
  PanelSum left;
  PanelSum right;
  double err;    // |whole - (left + right)|
  double noise;  // rounding level of the two halves
};

Panel make_panel(const ComplexIntegrand& f, double a, double b, Complex whole, int& evals) {
  const double mid = 0.5 * (a + b);
  Panel p{a, b, panel(f, a, mid, evals), panel(f, mid, b, evals), 0.0, 0.0};
  p.err = std::abs(whole - (p.left.value + p.right.value));
  p.noise = 50.0 * std::numeric_limits<double>::epsilon() * (p.left.magnitude + p.right.magnitude);
  return p;
}

bool smaller_error(const Panel& x, const Panel& y) { return x.err < y.err; }

}  // namespace

// Global adaptive scheme: the panel with the largest error estimate is split
// until the estimates of all unsettled panels sum below the tolerance. Panels
// whose estimate is at the rounding level, or which are too narrow, settle.
QuadratureResult integrate(const ComplexIntegrand& f, double a, double b,
                           const AdaptiveOptions& opts,
                           std::span<const double> breakpoints) {
  QuadratureResult result;
  if (a == b) return result;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> heap;
  Complex settled{0.0, 0.0};
  double settled_err = 0.0;
  auto add = [&](Panel p) {
    const double mid = 0.5 * (p.a + p.b);
    if (p.err <= p.noise || (p.b - p.a) < opts.min_width * std::max(1.0, std::abs(mid))) {
      settled += p.left.value + p.right.value;
      settled_err += p.err;
      return;
    }
    heap.push_back(p);
    std::push_heap(heap.begin(), heap.end(), smaller_error);
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Complex whole = panel(f, cuts[i], cuts[i + 1], result.evaluations).value;
    add(make_panel(f, cuts[i], cuts[i + 1], whole, result.evaluations));
  }

  auto totals = [&](Complex& value, double& err) {
    value = settled;
    err = 0.0;
    for (const auto& p : heap) {
      value += p.left.value + p.right.value;
      err += p.err;
    }
  };

  Complex value;
  double active_err = 0.0;
  totals(value, active_err);
  while (!heap.empty()) {
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    if (active_err <= tol) {
      // Recompute the running sums exactly before stopping.
      totals(value, active_err);
      if (active_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) break;
    }
    if (result.evaluations > opts.max_evaluations) {
      totals(value, active_err);
      throw QuadratureError("quadrature did not converge within evaluation budget", sign * value,
                            active_err + settled_err);
    }
    std::pop_heap(heap.begin(), heap.end(), smaller_error);
    const Panel p = heap.back();
    heap.pop_back();
    value -= p.left.value + p.right.value;
    active_err -= p.err;
    const double mid = 0.5 * (p.a + p.b);
    for (const Panel& child : {make_panel(f, p.a, mid, p.left.value, result.evaluations),
                               make_panel(f, mid, p.b, p.right.value, result.evaluations)}) {
      const std::size_t before = heap.size();
      add(child);
      if (heap.size() > before) active_err += child.err;
      value += child.left.value + child.right.value;
    }
  }

  totals(value, active_err);
  result.value = sign * value;
  result.est_error = active_err + settled_err;
  return result;
}

}  // namespace lightning::quad
