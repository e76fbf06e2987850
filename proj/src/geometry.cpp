#include "lightning/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lightning/quadrature.hpp"

namespace lightning::geometry {

namespace {

constexpr int kArclengthPanels = 32;

const quad::GaussRule& arclength_rule() {
  static const quad::GaussRule rule = quad::gauss_legendre(8);
  return rule;
}

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  auto cross = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 &&
         d3 != 0 && d4 != 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// SectorDomain

void SectorDomain::validate() const {
  if (!(beta >= 0.0 && beta < 2.0)) throw Error("sector: beta must lie in [0, 2)");
  if (!(radius > 0.0)) throw Error("sector: radius must be positive");
}

Complex SectorDomain::to_local(Complex z) const {
  return (z - apex) * std::polar(1.0, -axis_rotation);
}

Complex SectorDomain::from_local(Complex w) const {
  return apex + w * std::polar(1.0, axis_rotation);
}

bool SectorDomain::contains(Complex z, double tol) const {
  const Complex w = to_local(z);
  if (std::abs(w) > radius * (1.0 + tol)) return false;
  if (std::abs(w) <= tol * radius) return true;
  return std::abs(std::arg(w)) <= half_angle() + tol;
}

// ---------------------------------------------------------------------------
// Polygon

Polygon::Polygon(std::vector<Complex> vertices)
    : Polygon(vertices, std::vector<Edge>(vertices.size()),
              std::vector<CornerParams>(vertices.size())) {}

Polygon::Polygon(std::vector<Complex> vertices, std::vector<Edge> edges,
                 std::vector<CornerParams> corners)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), corners_(std::move(corners)) {
  finish();
}

void Polygon::finish() {
  const std::size_t m = vertices_.size();
  if (m < 3) throw Error("polygon: at least three vertices required");
  if (edges_.size() != m) edges_.resize(m);
  if (corners_.size() != m) corners_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (std::abs(vertex(k + 1) - vertex(k)) == 0.0) throw Error("degenerate edge");
    if (edges_[k].kind == EdgeKind::custom && (!edges_[k].curve || !edges_[k].derivative)) {
      throw Error("polygon: custom edge needs curve and derivative");
    }
  }
  lengths_.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) lengths_[k] = arclength(k, 1.0);

  const auto line = polyline(32);
  const std::size_t n = line.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(line[i], line[(i + 1) % n], line[j], line[(j + 1) % n])) {
        throw Error("polygon: boundary is self-intersecting");
      }
    }
  }
}

Complex Polygon::edge_point(std::size_t k, double t) const {
  const Edge& e = edges_[k];
  const Complex a = vertex(k);
  const Complex b = vertex(k + 1);
  switch (e.kind) {
    case EdgeKind::straight:
      return a + t * (b - a);
    case EdgeKind::bump: {
      const Complex normal = Complex(0.0, 1.0) * (b - a) / std::abs(b - a);
      const double s = std::sin(kPi * t);
      return a + t * (b - a) + e.amplitude * s * s * normal;
    }
    case EdgeKind::custom:
      return e.curve(t);
  }
  return a;
}

Complex Polygon::edge_tangent(std::size_t k, double t) const {
  const Edge& e = edges_[k];
  const Complex a = vertex(k);
  const Complex b = vertex(k + 1);
  switch (e.kind) {
    case EdgeKind::straight:
      return b - a;
    case EdgeKind::bump: {
      const Complex normal = Complex(0.0, 1.0) * (b - a) / std::abs(b - a);
      return (b - a) + e.amplitude * kPi * std::sin(2.0 * kPi * t) * normal;
    }
    case EdgeKind::custom:
      return e.derivative(t);
  }
  return b - a;
}

double Polygon::arclength(std::size_t k, double t) const {
  if (edges_[k].kind == EdgeKind::straight) return t * std::abs(vertex(k + 1) - vertex(k));
  const auto& rule = arclength_rule();
  const double width = t / kArclengthPanels;
  double sum = 0.0;
  for (int p = 0; p < kArclengthPanels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += rule.weights[i] * std::abs(edge_tangent(k, mid + 0.5 * width * rule.nodes[i]));
    }
  }
  return 0.5 * width * sum;
}

double Polygon::param_at_arclength(std::size_t k, double s) const {
  const double len = lengths_.empty() ? arclength(k, 1.0) : lengths_[k];
  if (s <= 0.0) return 0.0;
  if (s >= len) return 1.0;
  if (edges_[k].kind == EdgeKind::straight) return s / len;
  double lo = 0.0;
  double hi = 1.0;
  double t = s / len;
  for (int iter = 0; iter < 60; ++iter) {
    const double f = arclength(k, t) - s;
    if (std::abs(f) < 1e-15 * len) break;
    if (f > 0) hi = t; else lo = t;
    double next = t - f / std::abs(edge_tangent(k, t));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

std::vector<Complex> Polygon::polyline(int per_edge) const {
  std::vector<Complex> out;
  for (std::size_t k = 0; k < size(); ++k) {
    const int pieces = edges_[k].kind == EdgeKind::straight ? 1 : per_edge;
    for (int i = 0; i < pieces; ++i) out.push_back(edge_point(k, double(i) / pieces));
  }
  return out;
}

double Polygon::signed_area() const {
  const auto line = polyline(256);
  double area = 0.0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const Complex a = line[i];
    const Complex b = line[(i + 1) % line.size()];
    area += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * area;
}

bool Polygon::contains(Complex z) const {
  const auto line = polyline(256);
  bool inside = false;
  for (std::size_t i = 0, j = line.size() - 1; i < line.size(); j = i++) {
    const Complex a = line[i];
    const Complex b = line[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      const double x = (b.real() - a.real()) * (z.imag() - a.imag()) / (b.imag() - a.imag()) +
                       a.real();
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

Complex Polygon::centroid() const {
  Complex c{0.0, 0.0};
  for (Complex v : vertices_) c += v;
  return c / double(vertices_.size());
}

// ---------------------------------------------------------------------------
// Angles

std::vector<double> interior_angles(const Polygon& polygon) {
  const std::size_t m = polygon.size();
  const double orientation = polygon.signed_area() >= 0.0 ? 1.0 : -1.0;
  std::vector<double> betas(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Complex t_in = polygon.edge_tangent((k + m - 1) % m, 1.0);
    const Complex t_out = polygon.edge_tangent(k, 0.0);
    if (std::abs(t_in) == 0.0 || std::abs(t_out) == 0.0) throw Error("degenerate edge");
    const double turn = std::arg(t_out / t_in);
    const double beta = 1.0 - orientation * turn / kPi;
    if (const auto& declared = polygon.corners()[k].beta) {
      const bool straight = polygon.edge_is_straight(k) && polygon.edge_is_straight((k + m - 1) % m);
      if (straight && std::abs(*declared - beta) > 1e-10) {
        throw Error("polygon: declared beta does not match the corner angle");
      }
      betas[k] = straight ? beta : *declared;
    } else {
      betas[k] = beta;
    }
  }
  return betas;
}

double corner_alpha(const Polygon& polygon, std::size_t k, const std::vector<double>& betas) {
  if (const auto& a = polygon.corners()[k].alpha) return *a;
  return 1.0 / betas[k];
}

bool corner_is_log_type(double beta) {
  const double inv = 1.0 / beta;
  return std::abs(inv - std::round(inv)) < 1e-9;
}

// ---------------------------------------------------------------------------
// Sector sampling

SampleGrid sample_sector(const SectorDomain& domain, int n_ray, int n_arc, double cluster_ratio) {
  domain.validate();
  if (n_ray < 2 || n_arc < 1) throw Error("sample_sector: need n_ray >= 2 and n_arc >= 1");
  if (!(cluster_ratio > 0.0 && cluster_ratio < 1.0)) {
    throw Error("sample_sector: cluster_ratio must lie in (0, 1)");
  }
  SampleGrid grid;
  grid.role = SampleRole::sup_norm;
  grid.cluster_ratio = cluster_ratio;

  std::vector<double> angles;
  if (domain.beta == 0.0) {
    angles.push_back(0.0);
  } else {
    for (int l = -n_arc; l <= n_arc; ++l) angles.push_back(domain.half_angle() * l / n_arc);
  }

  grid.points.push_back(domain.apex);
  double r = domain.radius;
  for (int m = 0; m <= n_ray; ++m) {
    for (double phi : angles) grid.points.push_back(domain.from_local(std::polar(r, phi)));
    r *= cluster_ratio;
  }
  grid.weights.assign(grid.points.size(), 1.0);
  return grid;
}

SampleGrid sample_v(const SectorDomain& domain, int n_ray, double cluster_ratio) {
  domain.validate();
  SampleGrid grid;
  grid.cluster_ratio = cluster_ratio;
  grid.points.push_back(domain.apex);
  double r = domain.radius;
  for (int m = 0; m <= n_ray; ++m) {
    grid.points.push_back(domain.from_local(std::polar(r, domain.half_angle())));
    if (domain.beta > 0.0) grid.points.push_back(domain.from_local(std::polar(r, -domain.half_angle())));
    r *= cluster_ratio;
  }
  grid.weights.assign(grid.points.size(), 1.0);
  return grid;
}

SampleGrid sample_arc(const SectorDomain& domain, int n_arc, double x) {
  domain.validate();
  SampleGrid grid;
  if (domain.beta == 0.0) {
    grid.points.push_back(domain.from_local(Complex(x, 0.0)));
  } else {
    for (int l = -n_arc; l <= n_arc; ++l) {
      grid.points.push_back(domain.from_local(std::polar(x, domain.half_angle() * l / n_arc)));
    }
  }
  grid.weights.assign(grid.points.size(), 1.0);
  return grid;
}

// ---------------------------------------------------------------------------
// Boundary sampling

namespace {

void fill_from_arclength(SampleGrid& grid, const Polygon& polygon) {
  grid.points.resize(grid.arclength.size());
  for (std::size_t i = 0; i < grid.arclength.size(); ++i) {
    const auto k = static_cast<std::size_t>(grid.edge[i]);
    grid.points[i] = polygon.edge_point(k, polygon.param_at_arclength(k, grid.arclength[i]));
  }
  // Spacing weights: half the distance to each neighbour along the boundary.
  const std::size_t n = grid.arclength.size();
  grid.weights.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    double gap = grid.arclength[next] - grid.arclength[i];
    if (grid.edge[next] != grid.edge[i] || gap <= 0.0) {
      gap = polygon.edge_length(static_cast<std::size_t>(grid.edge[i])) - grid.arclength[i] +
            grid.arclength[next];
    }
    grid.weights[i] += 0.5 * gap;
    grid.weights[next] += 0.5 * gap;
  }
}

}  // namespace

SampleGrid boundary_samples(const Polygon& polygon, int per_corner, double cluster_sigma,
                            int uniform_per_edge) {
  if (per_corner < 4) throw Error("boundary_samples: per_corner must be at least 4");
  SampleGrid grid;
  grid.role = SampleRole::least_squares;
  const int n = per_corner;
  const double root_n = std::sqrt(double(n));
  for (std::size_t k = 0; k < polygon.size(); ++k) {
    const double len = polygon.edge_length(k);
    const double half = 0.5 * len;
    std::vector<double> s{0.0};
    for (int j = 1; j < n; ++j) s.push_back(half * std::exp(-cluster_sigma * (root_n - std::sqrt(double(j)))));
    s.push_back(half);
    for (int j = n - 1; j >= 1; --j) {
      s.push_back(len - half * std::exp(-cluster_sigma * (root_n - std::sqrt(double(j)))));
    }
    if (uniform_per_edge > 0) {
      for (int j = 1; j <= uniform_per_edge; ++j) s.push_back(len * j / (uniform_per_edge + 1.0));
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    for (double v : s) {
      grid.edge.push_back(static_cast<int>(k));
      grid.arclength.push_back(v);
    }
  }
  fill_from_arclength(grid, polygon);
  return grid;
}

SampleGrid refine_boundary(const SampleGrid& grid, const Polygon& polygon, int factor) {
  if (factor < 1) throw Error("refine_boundary: factor must be positive");
  SampleGrid fine;
  fine.role = SampleRole::sup_norm;
  fine.cluster_ratio = grid.cluster_ratio;
  const std::size_t n = grid.arclength.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int k = grid.edge[i];
    const double s0 = grid.arclength[i];
    double s1 = polygon.edge_length(static_cast<std::size_t>(k));
    if (i + 1 < n && grid.edge[i + 1] == k) s1 = grid.arclength[i + 1];
    for (int f = 0; f < factor; ++f) {
      fine.edge.push_back(k);
      fine.arclength.push_back(s0 + (s1 - s0) * f / factor);
    }
  }
  fill_from_arclength(fine, polygon);
  return fine;
}

// ---------------------------------------------------------------------------
// Text format

Polygon parse_polygon(std::istream& in) {
  std::vector<Complex> vertices;
  std::vector<CornerParams> corners;
  std::vector<std::pair<int, Edge>> curves;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    auto fail = [&](const std::string& why) {
      throw Error("polygon file line " + std::to_string(lineno) + ": " + why);
    };
    if (first == "curve") {
      int id = 0;
      std::string kind;
      double amplitude = 0.0;
      if (!(ls >> id >> kind)) fail("expected 'curve <edge> <kind> ...'");
      if (kind != "bump") fail("unknown curve kind '" + kind + "'");
      if (!(ls >> amplitude)) fail("bump needs an amplitude");
      Edge e;
      e.kind = EdgeKind::bump;
      e.amplitude = amplitude;
      curves.emplace_back(id, e);
      continue;
    }
    double re = 0.0;
    double im = 0.0;
    try {
      re = std::stod(first);
    } catch (const std::exception&) {
      fail("expected a vertex 're im'");
    }
    if (!(ls >> im)) fail("expected a vertex 're im'");
    CornerParams cp;
    std::string token;
    while (ls >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) fail("unexpected token '" + token + "'");
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      if (key == "beta") {
        cp.beta = std::stod(value);
      } else if (key == "alpha") {
        if (value != "auto") cp.alpha = std::stod(value);
      } else {
        fail("unknown vertex attribute '" + key + "'");
      }
    }
    vertices.emplace_back(re, im);
    corners.push_back(cp);
  }
  std::vector<Edge> edges(vertices.size());
  for (auto& [id, e] : curves) {
    if (id < 1 || static_cast<std::size_t>(id) > vertices.size()) {
      throw Error("polygon file: curve refers to missing edge " + std::to_string(id));
    }
    edges[static_cast<std::size_t>(id - 1)] = e;
  }
  return Polygon(std::move(vertices), std::move(edges), std::move(corners));
}

Polygon load_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open polygon file '" + path + "'");
  return parse_polygon(in);
}

void write_polygon(std::ostream& out, const Polygon& polygon) {
  char buf[96];
  for (std::size_t k = 0; k < polygon.size(); ++k) {
    const Complex v = polygon.vertex(k);
    std::snprintf(buf, sizeof buf, "%.17g %.17g", v.real(), v.imag());
    out << buf;
    const auto& cp = polygon.corners()[k];
    if (cp.beta) {
      std::snprintf(buf, sizeof buf, " beta=%.17g", *cp.beta);
      out << buf;
    }
    if (cp.alpha) {
      std::snprintf(buf, sizeof buf, " alpha=%.17g", *cp.alpha);
      out << buf;
    }
    out << '\n';
  }
  for (std::size_t k = 0; k < polygon.size(); ++k) {
    const Edge& e = polygon.edges()[k];
    if (e.kind == EdgeKind::bump) {
      std::snprintf(buf, sizeof buf, "curve %zu bump %.17g\n", k + 1, e.amplitude);
      out << buf;
    } else if (e.kind == EdgeKind::custom) {
      throw Error("write_polygon: custom edges have no text form");
    }
  }
}

Polygon concave_quadrilateral() {
  return Polygon({{2.0, 4.0}, {8.0, 4.0}, {4.0, 6.0}, {2.0, 10.0}});
}

Polygon curvy_l() {
  std::vector<Complex> v{{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 2.0}, {0.0, 2.0}};
  std::vector<Edge> edges(v.size());
  edges[2].kind = EdgeKind::bump;
  edges[2].amplitude = 0.1;
  return Polygon(std::move(v), std::move(edges), std::vector<CornerParams>(5));
}

Polygon unit_square() {
  return Polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

}  // namespace lightning::geometry
