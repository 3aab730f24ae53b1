#include "berger/plateau.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace berger {

void PolygonSpec::validate() const {
  if (m < 1 || n < 1)
    throw std::invalid_argument("PolygonSpec: m, n must be >= 1");
  if (variant == PolygonVariant::gamma_prime && n % 2 == 0)
    throw std::invalid_argument("PolygonSpec: the non-orientable polygon needs n odd");
  if (!(theta() > 0.0 && theta() <= M_PI && phi() > 0.0 && phi() <= M_PI))
    throw std::invalid_argument("PolygonSpec: angles out of (0, pi]");
}

double GeodesicEdge::length(const BergerParams& params) const {
  // curves below are unit-speed circles for the round metric, except the
  // doubled f1 arc of the non-orientable polygon which has speed 2
  const double h = 1e-6;
  const Vec4 mid = curve(0.5 * (t0 + t1));
  const Vec4 vel = (curve(0.5 * (t0 + t1) + h) - curve(0.5 * (t0 + t1) - h)) / (2 * h);
  return std::abs(t1 - t0) * std::sqrt(metric_at(params, mid, vel, vel));
}

namespace {

const Complex I(0.0, 1.0);

GeodesicEdge make_edge(std::function<Vec4(double)> curve, double t0, double t1,
                       GeodesicKind kind, const Isometry& refl) {
  GeodesicEdge e;
  e.curve = std::move(curve);
  e.t0 = t0;
  e.t1 = t1;
  e.start = e.curve(t0);
  e.end = e.curve(t1);
  e.kind = kind;
  e.reflection = refl;
  return e;
}

std::function<Vec4(double)> horizontal_circle(double zphase, double wphase) {
  return [zphase, wphase](double t) {
    return from_zw(std::polar(std::cos(t), zphase), std::polar(std::sin(t), wphase));
  };
}

}  // namespace

std::vector<GeodesicEdge> build_polygon(const PolygonSpec& spec) {
  spec.validate();
  const double th = spec.theta(), ph = spec.phi();
  const GeodesicKind H = GeodesicKind::horizontal;
  const GeodesicKind V = GeodesicKind::vertical;

  // named circles; all constant speed
  auto h1 = horizontal_circle(0.0, 0.0);
  auto h2 = horizontal_circle(0.0, ph);
  auto f1 = horizontal_circle(th, 0.0);
  auto f2 = horizontal_circle(th, ph);
  auto v1 = [](double t) { return from_zw(Complex(0, 0), std::polar(1.0, t)); };
  auto v2 = [](double t) { return from_zw(std::polar(1.0, t), Complex(0, 0)); };

  const Isometry H1 = Isometry::conj_diag(0.0, 0.0);
  const Isometry H2 = Isometry::conj_diag(0.0, 2.0 * ph);
  const Isometry F1 = Isometry::conj_diag(2.0 * th, 0.0);
  const Isometry F2 = Isometry::conj_diag(2.0 * th, 2.0 * ph);
  const Isometry Rv1 = Isometry::unitary_diag(M_PI, 0.0);
  const Isometry Rv2 = Isometry::unitary_diag(0.0, M_PI);

  std::vector<GeodesicEdge> edges;
  switch (spec.variant) {
    case PolygonVariant::gamma:
      // Q1 -> P1 -> Q2 -> P2 -> Q1
      edges.push_back(make_edge(h1, M_PI / 2, 0.0, H, H1));
      edges.push_back(make_edge(h2, 0.0, M_PI / 2, H, H2));
      edges.push_back(make_edge(f2, M_PI / 2, 0.0, H, F2));
      edges.push_back(make_edge(f1, 0.0, M_PI / 2, H, F1));
      break;
    case PolygonVariant::gamma_prime: {
      // P1 -> Q2 -> P2 -> (-P2) -> P1; the third edge runs the half circle
      // (cos(2t) e^{i theta}, sin(2t)) through Q1 to the antipode of P2
      auto f1d = [th](double t) {
        return from_zw(std::polar(std::cos(2 * t), th), Complex(std::sin(2 * t), 0));
      };
      edges.push_back(make_edge(h2, 0.0, M_PI / 2, H, H2));
      edges.push_back(make_edge(f2, M_PI / 2, 0.0, H, F2));
      edges.push_back(make_edge(f1d, 0.0, M_PI / 2, H, F1));
      edges.push_back(make_edge(v2, th - M_PI, 0.0, V, Rv2));
      break;
    }
    case PolygonVariant::gamma_tilde:
      // P1 -> Q1 -> Q2 -> P2 -> P1
      edges.push_back(make_edge(h1, 0.0, M_PI / 2, H, H1));
      edges.push_back(make_edge(v1, 0.0, ph, V, Rv1));
      edges.push_back(make_edge(f2, M_PI / 2, 0.0, H, F2));
      edges.push_back(make_edge(v2, th, 0.0, V, Rv2));
      break;
  }
  // closed circuit
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Vec4 gap = edges[k].end - edges[(k + 1) % edges.size()].start;
    if (gap.norm() > 1e-12)
      throw std::runtime_error("build_polygon: circuit does not close");
  }
  return edges;
}

GeodesicEdge transformed_edge(const GeodesicEdge& edge, const Isometry& iso) {
  GeodesicEdge out = edge;
  auto base = edge.curve;
  const Mat4 A = iso.matrix;
  out.curve = [base, A](double t) { return Vec4(A * base(t)); };
  out.start = A * edge.start;
  out.end = A * edge.end;
  out.reflection = iso.compose(edge.reflection).compose(iso.inverse());
  return out;
}

std::array<ParamSurface, 4> tetrahedron_faces(const PolygonSpec& spec) {
  spec.validate();
  const double th = spec.theta(), ph = spec.phi();
  // Phi1(t,s) = (cos t, sin t e^{is}): a piece of the equator sphere
  auto sphere_patch = [](double zphase, bool swapped, double s_max) {
    ParamSurface surf;
    auto pack = [zphase, swapped](Complex z, Complex w) {
      Complex zz = std::polar(1.0, zphase) * z;
      return swapped ? from_zw(w, zz) : from_zw(zz, w);
    };
    surf.eval = [pack](double t, double s) {
      return pack(std::cos(t), std::sin(t) * std::polar(1.0, s));
    };
    surf.d_s = [pack](double t, double s) {
      return pack(-std::sin(t), std::cos(t) * std::polar(1.0, s));
    };
    surf.d_t = [pack](double t, double s) {
      return pack(0.0, I * std::sin(t) * std::polar(1.0, s));
    };
    surf.d_ss = [pack](double t, double s) {
      return pack(-std::cos(t), -std::sin(t) * std::polar(1.0, s));
    };
    surf.d_st = [pack](double t, double s) {
      return pack(0.0, I * std::cos(t) * std::polar(1.0, s));
    };
    surf.d_tt = [pack](double t, double s) {
      return pack(0.0, -std::sin(t) * std::polar(1.0, s));
    };
    surf.s_min = 0.0;
    surf.s_max = M_PI / 2;
    surf.t_min = 0.0;
    surf.t_max = s_max;
    return surf;
  };
  // the rotation by phi around v2 applied to Phi3 only changes the w phase;
  // bake the phase shifts directly
  std::array<ParamSurface, 4> faces = {
      sphere_patch(0.0, false, ph),  // Phi1: triangle Q1 Q2 P1
      sphere_patch(th, false, ph),   // Phi2 = rho_theta . Phi1
      sphere_patch(0.0, true, th),   // Phi3 = swap . Phi1
      sphere_patch(ph, true, th),    // Phi4 = rho_phi . Phi3
  };
  return faces;
}

TriMesh init_mesh(const std::vector<GeodesicEdge>& edges, int resolution) {
  if (resolution < 2) throw std::invalid_argument("init_mesh: resolution < 2");
  if (edges.size() != 4) throw std::invalid_argument("init_mesh: need 4 edges");
  const int R = resolution;
  const Vec4 v0 = edges[0].start, v1 = edges[1].start, v2 = edges[2].start,
             v3 = edges[3].start;
  auto bottom = [&](double a) { return edges[0].at_fraction(a); };
  auto right = [&](double b) { return edges[1].at_fraction(b); };
  auto top = [&](double a) { return edges[2].at_fraction(1.0 - a); };
  auto left = [&](double b) { return edges[3].at_fraction(1.0 - b); };

  TriMesh mesh;
  mesh.vertices.reserve((R + 1) * (R + 1));
  mesh.boundary.reserve((R + 1) * (R + 1));
  std::vector<int> id((R + 1) * (R + 1));
  for (int i = 0; i <= R; ++i) {
    const double a = static_cast<double>(i) / R;
    for (int j = 0; j <= R; ++j) {
      const double b = static_cast<double>(j) / R;
      Vec4 p;
      BoundaryConstraint bc;
      if (j == 0) {
        p = bottom(a);
        bc = {0, edges[0].t0 + a * (edges[0].t1 - edges[0].t0)};
      } else if (i == R) {
        p = right(b);
        bc = {1, edges[1].t0 + b * (edges[1].t1 - edges[1].t0)};
      } else if (j == R) {
        p = top(a);
        bc = {2, edges[2].t0 + (1.0 - a) * (edges[2].t1 - edges[2].t0)};
      } else if (i == 0) {
        p = left(b);
        bc = {3, edges[3].t0 + (1.0 - b) * (edges[3].t1 - edges[3].t0)};
      } else {
        const Vec4 blend = (1 - b) * bottom(a) + b * top(a) + (1 - a) * left(b) +
                           a * right(b) -
                           ((1 - a) * (1 - b) * v0 + a * (1 - b) * v1 + a * b * v2 +
                            (1 - a) * b * v3);
        p = blend.normalized();
      }
      id[i * (R + 1) + j] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(p);
      mesh.boundary.push_back(bc);
    }
  }
  for (int i = 0; i < R; ++i) {
    for (int j = 0; j < R; ++j) {
      const int a = id[i * (R + 1) + j], b = id[(i + 1) * (R + 1) + j];
      const int c = id[(i + 1) * (R + 1) + j + 1], d = id[i * (R + 1) + j + 1];
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// area and its gradient

namespace {

struct TriGrad {
  double area = 0.0;
  Vec4 g[3] = {Vec4::Zero(), Vec4::Zero(), Vec4::Zero()};
  bool degenerate = false;
};

TriGrad triangle_area_gradient(const BergerParams& params, const Vec4& p0,
                               const Vec4& p1, const Vec4& p2) {
  TriGrad out;
  const double s = 4.0 / params.kappa;
  const double beta = params.hopf_coeff();
  const Vec4 ct = (p0 + p1 + p2) / 3.0;
  const double nn = ct.norm();
  const Vec4 c = ct / nn;
  const Vec4 u = p1 - p0, v = p2 - p0;
  const Vec4 uh = u - u.dot(c) * c, vh = v - v.dot(c) * c;
  const Vec4 V = jmul(c);
  const double Tu = uh.dot(V), Tv = vh.dot(V);
  const Vec4 mu = s * (uh + beta * Tu * V);
  const Vec4 mv = s * (vh + beta * Tv * V);
  const double suu = uh.dot(mu), svv = vh.dot(mv), suv = uh.dot(mv);
  const double W = suu * svv - suv * suv;
  if (W <= 1e-31) {
    out.degenerate = true;
    return out;
  }
  out.area = 0.5 * std::sqrt(W);

  const Vec4 ju = jmul(uh), jv = jmul(vh);
  const Vec4 wuu = -2.0 * u.dot(c) * mu - 2.0 * s * beta * Tu * ju;
  const Vec4 wvv = -2.0 * v.dot(c) * mv - 2.0 * s * beta * Tv * jv;
  const Vec4 wuv = -u.dot(c) * mv - v.dot(c) * mu - s * beta * (Tu * jv + Tv * ju);
  const Vec4 Eu = 2.0 * svv * mu - 2.0 * suv * mv;
  const Vec4 Ev = 2.0 * suu * mv - 2.0 * suv * mu;
  const Vec4 Ec = svv * wuu + suu * wvv - 2.0 * suv * wuv;
  const Vec4 q = (Ec - Ec.dot(c) * c) / (3.0 * nn);
  const double scale = 1.0 / (4.0 * std::sqrt(W));
  out.g[0] = scale * (q - Eu - Ev);
  out.g[1] = scale * (q + Eu);
  out.g[2] = scale * (q + Ev);
  return out;
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BERGER_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// evaluates f(face_index) for all faces, optionally on several threads; the
// per-face outputs are stored in a flat array so the later reduction is
// deterministic regardless of the thread count
template <typename F>
void for_each_face(int nfaces, int threads, F&& f) {
  if (threads <= 1) {
    for (int i = 0; i < nfaces; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  const int chunk = 256;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const int lo = next.fetch_add(chunk);
        if (lo >= nfaces) return;
        const int hi = std::min(lo + chunk, nfaces);
        for (int i = lo; i < hi; ++i) f(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double berger_area(const BergerParams& params, const TriMesh& mesh,
                   int* degenerate) {
  double total = 0.0;
  int bad = 0;
  for (const auto& f : mesh.faces) {
    const double a = triangle_area(params, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                   mesh.vertices[f[2]]);
    if (a < 1e-16) ++bad;
    total += a;
  }
  if (degenerate) *degenerate = bad;
  return total;
}

std::vector<Vec4> area_gradient(const BergerParams& params, const TriMesh& mesh) {
  std::vector<Vec4> grad(mesh.vertices.size(), Vec4::Zero());
  for (const auto& f : mesh.faces) {
    const TriGrad tg = triangle_area_gradient(params, mesh.vertices[f[0]],
                                              mesh.vertices[f[1]], mesh.vertices[f[2]]);
    for (int k = 0; k < 3; ++k) grad[f[k]] += tg.g[k];
  }
  return grad;
}

void validate_against_edges(const TriMesh& mesh,
                            const std::vector<GeodesicEdge>& edges, double tol) {
  if (!mesh.has_boundary_data())
    throw std::runtime_error("validate_against_edges: missing boundary data");
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const BoundaryConstraint& bc = mesh.boundary[v];
    if (!bc.is_boundary()) continue;
    if (bc.edge >= static_cast<int>(edges.size()))
      throw std::runtime_error("validate_against_edges: bad edge index");
    if ((edges[bc.edge].curve(bc.param) - mesh.vertices[v]).norm() > tol)
      throw std::runtime_error("validate_against_edges: constraint violated");
  }
}

double region_violation(const PolygonSpec& spec, const TriMesh& mesh) {
  const double th = spec.theta(), ph = spec.phi();
  double worst = 0.0;
  for (const Vec4& p : mesh.vertices) {
    const Complex z = z_of(p), w = w_of(p);
    const double im_z_rot = (std::polar(1.0, -th) * z).imag();
    const double im_w_rot = (std::polar(1.0, -ph) * w).imag();
    double v = std::max(im_z_rot, im_w_rot);
    v = std::max(v, -w.imag());
    if (spec.variant != PolygonVariant::gamma_prime) v = std::max(v, -z.imag());
    worst = std::max(worst, v);
  }
  return worst;
}

TriMesh transform_mesh(const TriMesh& mesh, const Isometry& iso) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = iso.matrix * v;
  return out;
}

// ---------------------------------------------------------------------------
// solver

namespace {

// one Gauss-Seidel sweep of per-vertex Newton steps on the local star area;
// only area-decreasing moves are accepted, so the global descent contract is
// preserved.  This removes the high-frequency residual modes the global
// preconditioned step damps slowly.
void newton_sweep(const BergerParams& params, TriMesh& mesh,
                  const std::vector<std::vector<int>>& vertex_faces,
                  double fd_step) {
  const int nv = static_cast<int>(mesh.vertices.size());
  for (int v = 0; v < nv; ++v) {
    if (mesh.is_boundary_vertex(v) || vertex_faces[v].empty()) continue;
    const Vec4 p0 = mesh.vertices[v];
    // round-orthonormal tangent frame at p0
    Vec4 frame[3];
    int k = 0;
    for (int i = 0; i < 4 && k < 3; ++i) {
      Vec4 e = tangential(p0, Vec4::Unit(i));
      for (int j = 0; j < k; ++j) e -= e.dot(frame[j]) * frame[j];
      if (e.norm() > 0.3) frame[k++] = e.normalized();
    }
    auto embed = [&](const Eigen::Vector3d& x) {
      Vec4 q = p0;
      for (int i = 0; i < 3; ++i) q += x[i] * frame[i];
      return q.normalized();
    };
    auto star_area = [&](const Vec4& q) {
      double a = 0.0;
      for (int fi : vertex_faces[v]) {
        const auto& f = mesh.faces[fi];
        Vec4 pts[3];
        for (int j = 0; j < 3; ++j)
          pts[j] = f[j] == v ? q : mesh.vertices[f[j]];
        a += triangle_area(params, pts[0], pts[1], pts[2]);
      }
      return a;
    };
    auto star_grad = [&](const Eigen::Vector3d& x) {
      const Vec4 q = embed(x);
      Vec4 g4 = Vec4::Zero();
      for (int fi : vertex_faces[v]) {
        const auto& f = mesh.faces[fi];
        Vec4 pts[3];
        int slot = 0;
        for (int j = 0; j < 3; ++j) {
          pts[j] = f[j] == v ? q : mesh.vertices[f[j]];
          if (f[j] == v) slot = j;
        }
        const TriGrad tg = triangle_area_gradient(params, pts[0], pts[1], pts[2]);
        g4 += tg.g[slot];
      }
      // pull back through the chart q = normalize(p0 + x.e)
      Vec4 raw = p0;
      for (int i = 0; i < 3; ++i) raw += x[i] * frame[i];
      const double n = raw.norm();
      Eigen::Vector3d g;
      for (int i = 0; i < 3; ++i) {
        const Vec4 dq = frame[i] / n - raw * (raw.dot(frame[i]) / (n * n * n));
        g[i] = g4.dot(dq);
      }
      return g;
    };

    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    double best = star_area(p0);
    for (int newton = 0; newton < 2; ++newton) {
      const Eigen::Vector3d g = star_grad(x);
      Eigen::Matrix3d H;
      for (int i = 0; i < 3; ++i) {
        Eigen::Vector3d xp = x, xm = x;
        xp[i] += fd_step;
        xm[i] -= fd_step;
        H.col(i) = (star_grad(xp) - star_grad(xm)) / (2 * fd_step);
      }
      H = 0.5 * (H + H.transpose()).eval();
      Eigen::Vector3d step = Eigen::Vector3d::Zero();
      double damping = 1e-12;
      for (int attempt = 0; attempt < 6; ++attempt) {
        const Eigen::Matrix3d Hd = H + damping * Eigen::Matrix3d::Identity();
        const Eigen::LDLT<Eigen::Matrix3d> ldlt(Hd);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
          step = ldlt.solve(-g);
          break;
        }
        damping = std::max(damping * 100.0, 1e-8 * H.cwiseAbs().maxCoeff());
      }
      if (step.squaredNorm() == 0.0) break;
      bool moved = false;
      for (double scale = 1.0; scale > 0.05; scale *= 0.5) {
        const Eigen::Vector3d trial = x + scale * step;
        const double a = star_area(embed(trial));
        if (a < best) {
          x = trial;
          best = a;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    mesh.vertices[v] = embed(x);
  }
}

double min_triangle_angle(const TriMesh& mesh) {
  double worst = M_PI;
  for (const auto& f : mesh.faces) {
    const Vec4& a = mesh.vertices[f[0]];
    const Vec4& b = mesh.vertices[f[1]];
    const Vec4& c = mesh.vertices[f[2]];
    const double la = (b - c).norm(), lb = (a - c).norm(), lc = (a - b).norm();
    auto angle = [](double opp, double x, double y) {
      return std::acos(std::clamp((x * x + y * y - opp * opp) / (2 * x * y), -1.0, 1.0));
    };
    worst = std::min({worst, angle(la, lb, lc), angle(lb, la, lc), angle(lc, la, lb)});
  }
  return worst;
}

void tangential_smooth(TriMesh& mesh,
                       const std::vector<std::vector<int>>& neighbors) {
  std::vector<Vec4> fresh = mesh.vertices;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (mesh.is_boundary_vertex(static_cast<int>(v)) || neighbors[v].empty())
      continue;
    Vec4 avg = Vec4::Zero();
    for (int w : neighbors[v]) avg += mesh.vertices[w];
    avg /= static_cast<double>(neighbors[v].size());
    // restrict the move to the surface: keep only the component of the
    // displacement orthogonal to the local normal
    Vec4 normal = Vec4::Zero();
    const Vec4& p = mesh.vertices[v];
    for (std::size_t k = 0; k + 1 < neighbors[v].size(); ++k) {
      const Vec4 e1 = mesh.vertices[neighbors[v][k]] - p;
      const Vec4 e2 = mesh.vertices[neighbors[v][k + 1]] - p;
      Vec4 nrm = cross4(p, e1, e2);
      if (nrm.dot(normal) < 0) nrm = -nrm;
      normal += nrm;
    }
    Vec4 disp = 0.5 * (avg - p);
    if (normal.norm() > 1e-14) {
      normal.normalize();
      disp -= disp.dot(normal) * normal;
    }
    fresh[v] = (p + disp).normalized();
  }
  mesh.vertices = std::move(fresh);
}

}  // namespace

std::pair<TriMesh, SolveReport> minimize_area(const BergerParams& params,
                                              const TriMesh& input,
                                              const SolveOptions& opts) {
  if (!input.has_boundary_data())
    throw std::invalid_argument("minimize_area: mesh lacks boundary data");
  TriMesh mesh = input;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nf = static_cast<int>(mesh.faces.size());
  const int threads = thread_count(opts.threads);

  // scale-aware default tolerance from the mean boundary sample spacing
  double mean_edge = 0.0;
  {
    int cnt = 0;
    for (const auto& f : mesh.faces) {
      mean_edge += (mesh.vertices[f[0]] - mesh.vertices[f[1]]).norm();
      ++cnt;
    }
    mean_edge /= std::max(cnt, 1);
  }
  const double grad_tol = opts.grad_tol > 0 ? opts.grad_tol : 1e-7 * mean_edge;

  std::vector<std::vector<int>> neighbors(nv);
  {
    std::vector<std::vector<int>> seen(nv);
    auto link = [&](int a, int b) {
      for (int x : seen[a])
        if (x == b) return;
      seen[a].push_back(b);
      neighbors[a].push_back(b);
    };
    for (const auto& f : mesh.faces)
      for (int k = 0; k < 3; ++k) {
        link(f[k], f[(k + 1) % 3]);
        link(f[(k + 1) % 3], f[k]);
      }
  }

  std::vector<TriGrad> face_data(nf);
  std::vector<Vec4> grad(nv), direction(nv);
  std::vector<double> dual(nv);

  auto evaluate = [&](const TriMesh& m, int* degenerate) {
    for_each_face(nf, threads, [&](int i) {
      const auto& f = m.faces[i];
      face_data[i] = triangle_area_gradient(params, m.vertices[f[0]],
                                            m.vertices[f[1]], m.vertices[f[2]]);
    });
    double total = 0.0;
    int bad = 0;
    for (int i = 0; i < nf; ++i) {
      total += face_data[i].area;
      if (face_data[i].degenerate) ++bad;
    }
    if (degenerate) *degenerate = bad;
    return total;
  };

  auto area_only = [&](const TriMesh& m) {
    std::vector<double> partial(nf);
    for_each_face(nf, threads, [&](int i) {
      const auto& f = m.faces[i];
      partial[i] = triangle_area(params, m.vertices[f[0]], m.vertices[f[1]],
                                 m.vertices[f[2]]);
    });
    double total = 0.0;
    for (int i = 0; i < nf; ++i) total += partial[i];
    return total;
  };

  SolveReport report;
  const double beta = params.hopf_coeff();
  const double bfrac = beta / (1.0 + beta);
  double step_hint = 1.0;

  int degen = 0;
  double area = evaluate(mesh, &degen);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // accumulate per-vertex data in face order (deterministic)
    std::fill(grad.begin(), grad.end(), Vec4::Zero());
    std::fill(dual.begin(), dual.end(), 0.0);
    for (int i = 0; i < nf; ++i) {
      const auto& f = mesh.faces[i];
      for (int k = 0; k < 3; ++k) {
        grad[f[k]] += face_data[i].g[k];
        dual[f[k]] += face_data[i].area / 3.0;
      }
    }

    // Riemannian gradient and preconditioned direction
    double gnorm = 0.0, resid = 0.0, dd = 0.0, dmax = 0.0;
    for (int v = 0; v < nv; ++v) {
      if (mesh.is_boundary_vertex(v)) {
        direction[v].setZero();
        continue;
      }
      const Vec4& p = mesh.vertices[v];
      const Vec4 gproj = tangential(p, grad[v]);
      const Vec4 Vp = jmul(p);
      const Vec4 riem =
          params.kappa / 4.0 * (gproj - bfrac * gproj.dot(Vp) * Vp);
      const double norm_g = std::sqrt(std::max(riem.dot(gproj), 0.0));
      gnorm = std::max(gnorm, norm_g);
      if (dual[v] > 0.0) resid = std::max(resid, norm_g / (2.0 * dual[v]));
      direction[v] = -riem / std::max(dual[v], 1e-30);
      dd += grad[v].dot(direction[v]);
      dmax = std::max(dmax, direction[v].norm());
    }
    report.grad_norm = gnorm;
    report.mean_curvature_residual = resid;
    report.iterations = iter;
    if (gnorm <= grad_tol) {
      report.converged = true;
      break;
    }
    if (dd >= 0.0) break;  // numerically flat

    // backtracking line search with projection to the sphere
    double t = std::min(step_hint * 2.0, 0.45 * mean_edge / std::max(dmax, 1e-30));
    TriMesh trial = mesh;
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      for (int v = 0; v < nv; ++v)
        if (!mesh.is_boundary_vertex(v))
          trial.vertices[v] = (mesh.vertices[v] + t * direction[v]).normalized();
      const double trial_area = area_only(trial);
      if (trial_area <= area + opts.armijo * t * dd) {
        mesh.vertices = trial.vertices;
        area = evaluate(mesh, &degen);
        step_hint = t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // line search exhausted at machine precision

    if (opts.smooth_every > 0 && (iter + 1) % opts.smooth_every == 0) {
      if (min_triangle_angle(mesh) < opts.min_angle_deg * M_PI / 180.0) {
        tangential_smooth(mesh, neighbors);
        area = evaluate(mesh, &degen);
      }
      if (min_triangle_angle(mesh) < 0.5 * M_PI / 180.0)
        throw std::runtime_error("minimize_area: mesh degenerated, remesh needed");
    }
  }
  report.area = area;
  report.degenerate_triangles = degen;
  return {std::move(mesh), report};
}

}  // namespace berger
