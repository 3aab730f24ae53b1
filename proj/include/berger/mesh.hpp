#pragma once

#include <array>
#include <optional>
#include <vector>

#include "berger/core.hpp"

// Triangle meshes with vertices on S^3, plus the combinatorial utilities the
// assembler and the Plateau solver share: Euler characteristic, closedness,
// orientation propagation, welding and quotients.

namespace berger {

// boundary attachment of a vertex: index of the polygon edge it samples and
// the curve parameter there; edge < 0 marks an interior vertex
struct BoundaryConstraint {
  int edge = -1;
  double param = 0.0;
  bool is_boundary() const { return edge >= 0; }
};

struct TriMesh {
  std::vector<Vec4> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<BoundaryConstraint> boundary;  // empty or one entry per vertex

  bool has_boundary_data() const { return boundary.size() == vertices.size(); }
  bool is_boundary_vertex(int v) const {
    return has_boundary_data() && boundary[v].is_boundary();
  }
};

std::size_t count_edges(const TriMesh& mesh);
int euler_characteristic(const TriMesh& mesh);  // V - E + F

// every edge incident to exactly two faces
bool is_closed(const TriMesh& mesh);

// breadth-first orientation propagation over face adjacency; a propagation
// contradiction means the surface is non-orientable.  Works per connected
// component; returns false if any component is non-orientable.
bool is_orientable(const TriMesh& mesh);

// structural checks for the TriMesh invariants; throws std::runtime_error
// with a description on the first violation
void validate_mesh(const TriMesh& mesh, double sphere_tol = 1e-10);

// merge several meshes, identifying vertices closer than tol in R^4;
// exact duplicate faces (same vertex set) are collapsed to one copy
TriMesh weld(const std::vector<TriMesh>& pieces, double tol);

// quotient by a free involution given as a vertex permutation; faces are
// identified in pairs
TriMesh quotient_by_involution(const TriMesh& mesh, const std::vector<int>& image);

// per-face Berger areas and the total
double triangle_area(const BergerParams& params, const Vec4& p0, const Vec4& p1,
                     const Vec4& p2);

// stereographic projection of S^3 from the point (0,-1), sending the vertical
// geodesic through (0,1) to the z axis and the one through (1,0) to the unit
// circle of the xy plane
Vec3 stereographic(const Vec4& p);

}  // namespace berger
