#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lightning/common.hpp"

namespace lightning::geometry {

// Sector {apex + e^{i rot} x e^{i phi} : 0 <= x <= radius, |phi| <= beta*pi/2}.
struct SectorDomain {
  double beta = 1.0;
  double radius = 1.0;
  Complex apex{0.0, 0.0};
  double axis_rotation = 0.0;

  void validate() const;
  double half_angle() const { return beta * kPi / 2.0; }
  bool contains(Complex z, double tol = 1e-12) const;
  // Position of z relative to the apex with the axis rotated onto +x.
  Complex to_local(Complex z) const;
  Complex from_local(Complex w) const;
};

enum class EdgeKind { straight, bump, custom };

// Boundary edge from vertex k to vertex k+1, parametrised by t in [0, 1].
// A bump edge is the chord displaced by amplitude * sin^2(pi t) along the
// chord's left normal; the sin^2 profile keeps the endpoint tangents equal to
// the chord direction, so corner angles are those of the straight polygon.
struct Edge {
  EdgeKind kind = EdgeKind::straight;
  double amplitude = 0.0;
  std::function<Complex(double)> curve;       // custom only
  std::function<Complex(double)> derivative;  // custom only
};

struct CornerParams {
  std::optional<double> beta;   // declared interior angle / pi
  std::optional<double> alpha;  // singularity exponent; nullopt means "auto"
};

class Polygon {
 public:
  Polygon() = default;
  explicit Polygon(std::vector<Complex> vertices);
  Polygon(std::vector<Complex> vertices, std::vector<Edge> edges,
          std::vector<CornerParams> corners);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Complex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<CornerParams>& corners() const { return corners_; }
  Complex vertex(std::size_t k) const { return vertices_[k % size()]; }

  Complex edge_point(std::size_t k, double t) const;
  Complex edge_tangent(std::size_t k, double t) const;
  bool edge_is_straight(std::size_t k) const {
    return edges_[k].kind == EdgeKind::straight;
  }
  double edge_length(std::size_t k) const { return lengths_[k]; }
  // Arclength from the start of edge k to parameter t.
  double arclength(std::size_t k, double t) const;
  // Parameter at which the arclength from the start of edge k equals s.
  double param_at_arclength(std::size_t k, double s) const;

  // Dense polyline approximation of the closed boundary.
  std::vector<Complex> polyline(int per_edge = 64) const;
  double signed_area() const;
  bool contains(Complex z) const;
  Complex centroid() const;

 private:
  void finish();

  std::vector<Complex> vertices_;
  std::vector<Edge> edges_;
  std::vector<CornerParams> corners_;
  std::vector<double> lengths_;
};

enum class SampleRole { sup_norm, least_squares };

struct SampleGrid {
  std::vector<Complex> points;
  // Local spacing per point (arclength share for boundary grids, 1 otherwise).
  std::vector<double> weights;
  SampleRole role = SampleRole::sup_norm;
  double cluster_ratio = 0.5;
  // Boundary grids only: edge index and arclength offset of each point.
  std::vector<int> edge;
  std::vector<double> arclength;

  std::size_t size() const { return points.size(); }
};

// Interior angle / pi at each vertex. Curved edges use their end tangents.
std::vector<double> interior_angles(const Polygon& polygon);

// Resolved per-corner exponent: declared alpha, else 1/beta_k.
double corner_alpha(const Polygon& polygon, std::size_t k,
                    const std::vector<double>& betas);
// True when 1/beta is an integer, where the leading singularity carries a log.
bool corner_is_log_type(double beta);

SampleGrid sample_sector(const SectorDomain& domain, int n_ray, int n_arc,
                         double cluster_ratio);
// Only the two boundary rays of the sector (the V-shaped subset).
SampleGrid sample_v(const SectorDomain& domain, int n_ray, double cluster_ratio);
// Points on the arc |z - apex| = radius.
SampleGrid sample_arc(const SectorDomain& domain, int n_arc, double x = 1.0);

// Boundary collocation points, 2*per_corner per edge, with distances from
// each corner tapered like the lightning poles: d_j = L e^{-sigma(sqrt(n)-sqrt(j))}
// (L half the edge). uniform_per_edge adds equispaced points along each edge.
SampleGrid boundary_samples(const Polygon& polygon, int per_corner,
                            double cluster_sigma, int uniform_per_edge = 0);
// Subdivides every gap of a boundary grid into `factor` equal arclength pieces.
SampleGrid refine_boundary(const SampleGrid& grid, const Polygon& polygon,
                           int factor);

// Text format: one vertex per line "re im [beta=<v>] [alpha=<v>]",
// "curve <edge> bump <amplitude>" (edge numbering from 1), '#' comments.
Polygon parse_polygon(std::istream& in);
Polygon load_polygon(const std::string& path);
void write_polygon(std::ostream& out, const Polygon& polygon);

// Domains used by the experiments.
Polygon concave_quadrilateral();
Polygon curvy_l();
Polygon unit_square();

}  // namespace lightning::geometry
