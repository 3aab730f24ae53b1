#pragma once

#include <array>

#include "berger/families.hpp"
#include "berger/geodesics.hpp"
#include "berger/mesh.hpp"

// Geodesic polygons bounding the fundamental pieces, the mean-convex
// tetrahedron faces, and discrete Berger-area minimization with the boundary
// pinned to the polygon.

namespace berger {

enum class PolygonVariant {
  gamma,        // Q1 P1 Q2 P2, four horizontal edges
  gamma_prime,  // P1 Q2 P2 (-P2), three horizontal edges and a vertical one
  gamma_tilde   // P1 Q1 Q2 P2, two horizontal and two vertical edges
};

struct PolygonSpec {
  int m = 1, n = 1;
  PolygonVariant variant = PolygonVariant::gamma;

  double theta() const { return M_PI / (m + 1); }
  double phi() const { return M_PI / (n + 1); }
  void validate() const;  // m, n >= 1; gamma_prime requires n odd
};

struct GeodesicEdge {
  std::function<Vec4(double)> curve;  // constant-speed arc of a geodesic
  double t0 = 0.0, t1 = 1.0;          // native parameter range, start -> end
  Vec4 start = Vec4::Zero(), end = Vec4::Zero();
  GeodesicKind kind = GeodesicKind::horizontal;
  Isometry reflection;  // geodesic reflection across the full geodesic

  Vec4 at_fraction(double f) const { return curve(t0 + f * (t1 - t0)); }
  // exact length: our arcs have constant Berger speed
  double length(const BergerParams& params) const;
};

// the four edges of the chosen polygon as a closed circuit
std::vector<GeodesicEdge> build_polygon(const PolygonSpec& spec);

// edge transported by an ambient isometry (curve, endpoints, reflection)
GeodesicEdge transformed_edge(const GeodesicEdge& edge, const Isometry& iso);

// the four faces of the solid tetrahedron W spanned by Gamma, v1 and v2;
// each is a piece of a rotated equator sphere, hence minimal
std::array<ParamSurface, 4> tetrahedron_faces(const PolygonSpec& spec);

// triangulated disk: boundary sampled uniformly on the edges (res per edge),
// interior seeded by a normalized Coons blend of the boundary samples
TriMesh init_mesh(const std::vector<GeodesicEdge>& edges, int resolution);

// total Berger area; triangles with area below 1e-16 count as zero and are
// tallied into *degenerate when given
double berger_area(const BergerParams& params, const TriMesh& mesh,
                   int* degenerate = nullptr);

// Euclidean per-vertex gradient of the total Berger area
std::vector<Vec4> area_gradient(const BergerParams& params, const TriMesh& mesh);

struct SolveOptions {
  int max_iter = 50000;
  double grad_tol = 0.0;  // 0: use 1e-7 * mean boundary-edge length
  double armijo = 1e-4;
  int smooth_every = 500;
  double min_angle_deg = 5.0;
  int sweep_every = 10;  // local Newton sweeps between global steps
  int threads = 0;       // 0: BERGER_NUM_THREADS or 1
};

struct SolveReport {
  double area = 0.0;
  double grad_norm = 0.0;  // max Berger norm of the per-vertex area gradient
  int iterations = 0;
  double mean_curvature_residual = 0.0;  // max |grad| / (2 * dual area)
  bool converged = false;
  int degenerate_triangles = 0;
};

// projected gradient descent with dual-area preconditioning and Armijo
// backtracking; boundary vertices stay fixed.  The mesh must carry boundary
// data.  Throws std::runtime_error if the mesh degenerates.
std::pair<TriMesh, SolveReport> minimize_area(const BergerParams& params,
                                              const TriMesh& mesh,
                                              const SolveOptions& opts = {});

// boundary samples must land on their constraint edge (validate to 1e-8)
void validate_against_edges(const TriMesh& mesh,
                            const std::vector<GeodesicEdge>& edges,
                            double tol = 1e-8);

// largest violation of the defining inequalities of the mean-convex region W
double region_violation(const PolygonSpec& spec, const TriMesh& mesh);

TriMesh transform_mesh(const TriMesh& mesh, const Isometry& iso);

}  // namespace berger
