#include "berger/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace berger {

namespace {

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::array<int, 3> sorted_face(const std::array<int, 3>& f) {
  std::array<int, 3> s = f;
  std::sort(s.begin(), s.end());
  return s;
}

struct FaceKeyHash {
  std::size_t operator()(const std::array<int, 3>& f) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : f) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::size_t count_edges(const TriMesh& mesh) {
  std::unordered_set<std::uint64_t> edges;
  edges.reserve(mesh.faces.size() * 2);
  for (const auto& f : mesh.faces) {
    edges.insert(edge_key(f[0], f[1]));
    edges.insert(edge_key(f[1], f[2]));
    edges.insert(edge_key(f[2], f[0]));
  }
  return edges.size();
}

int euler_characteristic(const TriMesh& mesh) {
  return static_cast<int>(mesh.vertices.size()) -
         static_cast<int>(count_edges(mesh)) + static_cast<int>(mesh.faces.size());
}

namespace {
std::unordered_map<std::uint64_t, std::vector<int>> edge_faces(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, std::vector<int>> out;
  out.reserve(mesh.faces.size() * 2);
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const auto& f = mesh.faces[fi];
    out[edge_key(f[0], f[1])].push_back(fi);
    out[edge_key(f[1], f[2])].push_back(fi);
    out[edge_key(f[2], f[0])].push_back(fi);
  }
  return out;
}
}  // namespace

bool is_closed(const TriMesh& mesh) {
  if (mesh.faces.empty()) return false;
  for (const auto& [key, fs] : edge_faces(mesh))
    if (fs.size() != 2) return false;
  return true;
}

bool is_orientable(const TriMesh& mesh) {
  const auto ef = edge_faces(mesh);
  // directed edge occurrence of (a,b) in face f: +1 if (a,b) appears in cyclic
  // order, -1 if (b,a) does
  auto direction = [&](int fi, int a, int b) {
    const auto& f = mesh.faces[fi];
    for (int k = 0; k < 3; ++k) {
      if (f[k] == a && f[(k + 1) % 3] == b) return +1;
      if (f[k] == b && f[(k + 1) % 3] == a) return -1;
    }
    return 0;
  };

  std::vector<int> flip(mesh.faces.size(), 0);  // 0 unvisited, +1 keep, -1 flip
  for (int seed = 0; seed < static_cast<int>(mesh.faces.size()); ++seed) {
    if (flip[seed] != 0) continue;
    flip[seed] = +1;
    std::queue<int> bfs;
    bfs.push(seed);
    while (!bfs.empty()) {
      const int fi = bfs.front();
      bfs.pop();
      const auto& f = mesh.faces[fi];
      for (int k = 0; k < 3; ++k) {
        const int a = f[k], b = f[(k + 1) % 3];
        for (int fj : ef.at(edge_key(a, b))) {
          if (fj == fi) continue;
          // consistent orientation: shared edge traversed in opposite order
          const int want = -direction(fj, a, b) * direction(fi, a, b) * flip[fi];
          if (flip[fj] == 0) {
            flip[fj] = want;
            bfs.push(fj);
          } else if (flip[fj] != want) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

void validate_mesh(const TriMesh& mesh, double sphere_tol) {
  const int nv = static_cast<int>(mesh.vertices.size());
  for (int i = 0; i < nv; ++i)
    if (std::abs(mesh.vertices[i].squaredNorm() - 1.0) > 2.0 * sphere_tol)
      throw std::runtime_error("validate_mesh: vertex off S^3");
  std::unordered_set<std::array<int, 3>, FaceKeyHash> seen;
  for (const auto& f : mesh.faces) {
    for (int v : f)
      if (v < 0 || v >= nv) throw std::runtime_error("validate_mesh: bad face index");
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
      throw std::runtime_error("validate_mesh: degenerate face");
    if (!seen.insert(sorted_face(f)).second)
      throw std::runtime_error("validate_mesh: duplicate face");
  }
  if (!mesh.boundary.empty() && !mesh.has_boundary_data())
    throw std::runtime_error("validate_mesh: boundary array size mismatch");
}

TriMesh weld(const std::vector<TriMesh>& pieces, double tol) {
  TriMesh out;
  // spatial hash on a grid of cell size tol; candidate duplicates are probed
  // in the 3^4 neighboring cells
  const double cell = std::max(tol, 1e-300);
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  auto cell_key = [&](long long a, long long b, long long c, long long d) {
    std::uint64_t h = 1469598103934665603ull;
    for (long long v : {a, b, c, d}) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  };
  auto find_or_insert = [&](const Vec4& p) {
    const long long ix = static_cast<long long>(std::floor(p[0] / cell));
    const long long iy = static_cast<long long>(std::floor(p[1] / cell));
    const long long iz = static_cast<long long>(std::floor(p[2] / cell));
    const long long iw = static_cast<long long>(std::floor(p[3] / cell));
    for (long long a = ix - 1; a <= ix + 1; ++a)
      for (long long b = iy - 1; b <= iy + 1; ++b)
        for (long long c = iz - 1; c <= iz + 1; ++c)
          for (long long d = iw - 1; d <= iw + 1; ++d) {
            auto it = grid.find(cell_key(a, b, c, d));
            if (it == grid.end()) continue;
            for (int idx : it->second)
              if ((out.vertices[idx] - p).norm() <= tol) return idx;
          }
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back(p);
    grid[cell_key(ix, iy, iz, iw)].push_back(idx);
    return idx;
  };

  std::unordered_set<std::array<int, 3>, FaceKeyHash> face_set;
  for (const auto& piece : pieces) {
    std::vector<int> remap(piece.vertices.size());
    for (std::size_t i = 0; i < piece.vertices.size(); ++i)
      remap[i] = find_or_insert(piece.vertices[i]);
    for (const auto& f : piece.faces) {
      std::array<int, 3> g = {remap[f[0]], remap[f[1]], remap[f[2]]};
      if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) continue;
      if (!face_set.insert(sorted_face(g)).second) continue;
      out.faces.push_back(g);
    }
  }
  return out;
}

TriMesh quotient_by_involution(const TriMesh& mesh, const std::vector<int>& image) {
  const int nv = static_cast<int>(mesh.vertices.size());
  if (static_cast<int>(image.size()) != nv)
    throw std::invalid_argument("quotient_by_involution: image size mismatch");
  for (int i = 0; i < nv; ++i) {
    if (image[image[i]] != i)
      throw std::invalid_argument("quotient_by_involution: not an involution");
    if (image[i] == i)
      throw std::invalid_argument("quotient_by_involution: involution has a fixed vertex");
  }
  std::vector<int> remap(nv, -1);
  TriMesh out;
  for (int i = 0; i < nv; ++i) {
    if (image[i] < i) {
      remap[i] = remap[image[i]];
      continue;
    }
    remap[i] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[i]);
  }
  std::unordered_set<std::array<int, 3>, FaceKeyHash> face_set;
  for (const auto& f : mesh.faces) {
    std::array<int, 3> g = {remap[f[0]], remap[f[1]], remap[f[2]]};
    if (!face_set.insert(sorted_face(g)).second) continue;
    out.faces.push_back(g);
  }
  return out;
}

double triangle_area(const BergerParams& params, const Vec4& p0, const Vec4& p1,
                     const Vec4& p2) {
  const Vec4 centroid = ((p0 + p1 + p2) / 3.0).normalized();
  const Vec4 u = tangential(centroid, p1 - p0);
  const Vec4 v = tangential(centroid, p2 - p0);
  const double suu = metric_at(params, centroid, u, u);
  const double svv = metric_at(params, centroid, v, v);
  const double suv = metric_at(params, centroid, u, v);
  const double w = suu * svv - suv * suv;
  return w > 0.0 ? 0.5 * std::sqrt(w) : 0.0;
}

Vec3 stereographic(const Vec4& p) {
  // pole (z,w) = (0,-1), i.e. coordinates (0,0,-1,0)
  const double denom = 1.0 + p[2];
  if (std::abs(denom) < 1e-14)
    throw std::domain_error("stereographic: point at the projection pole");
  return Vec3(p[0], p[1], p[3]) / denom;
}

}  // namespace berger
