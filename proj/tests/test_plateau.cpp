#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "berger/curvature.hpp"
#include "berger/plateau.hpp"
#include "test_util.hpp"

using namespace berger;

namespace {

// quadrature oracle for edge length: composite Simpson of sqrt(g(c', c'))
double edge_length_quadrature(const BergerParams& params, const GeodesicEdge& e,
                              int panels = 512) {
  const double h = (e.t1 - e.t0) / panels;
  auto speed = [&](double t) {
    const double dt = 1e-6;
    const Vec4 vel = (e.curve(t + dt) - e.curve(t - dt)) / (2 * dt);
    const Vec4 p = e.curve(t);
    return std::sqrt(metric_at(params, p, vel, vel));
  };
  double sum = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * speed(e.t0 + i * h);
  }
  return std::abs(sum * h / 3.0);
}

GeodesicKind edge_kind_probe(const BergerParams& params, const GeodesicEdge& e) {
  const double tm = 0.5 * (e.t0 + e.t1), dt = 1e-6;
  const Vec4 p = e.curve(tm);
  const Vec4 vel = tangential(p, (e.curve(tm + dt) - e.curve(tm - dt)) / (2 * dt));
  return classify(params, TangentVector::make(SpherePoint::project(p), vel));
}

// round distance from q to the image of Phi_1(s,t) = (cos s e^{it}, sin s e^{it}):
// closed form via max_t [Re(z e^{-it})^2 + Re(w e^{-it})^2]
double distance_to_phi1(const Vec4& q) {
  const Complex z = z_of(q), w = w_of(q);
  const double gmax = 0.5 * (1.0 + std::abs(z * z + w * w));
  const double c = std::clamp(std::sqrt(gmax), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

TEST_CASE("build_polygon: closed circuits with the advertised vertices") {
  PolygonSpec g{1, 1, PolygonVariant::gamma};
  auto edges = build_polygon(g);
  REQUIRE(edges.size() == 4);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK((edges[k].end - edges[(k + 1) % 4].start).norm() < 1e-12);
  // Q1, P1, Q2, P2 for theta = phi = pi/2
  CHECK((edges[0].start - Vec4(0, 0, 1, 0)).norm() < 1e-12);  // Q1 = (0,1)
  CHECK((edges[1].start - Vec4(1, 0, 0, 0)).norm() < 1e-12);  // P1 = (1,0)
  CHECK((edges[2].start - Vec4(0, 0, 0, 1)).norm() < 1e-12);  // Q2 = (0,i)
  CHECK((edges[3].start - Vec4(0, 1, 0, 0)).norm() < 1e-12);  // P2 = (i,0)

  CHECK_THROWS_AS((void)build_polygon(PolygonSpec{0, 1, PolygonVariant::gamma}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)build_polygon(PolygonSpec{1, 2, PolygonVariant::gamma_prime}),
      std::invalid_argument);
}

TEST_CASE("build_polygon: edge kinds per variant") {
  BergerParams params(2.0, 0.8);
  for (auto& e : build_polygon({2, 1, PolygonVariant::gamma}))
    CHECK(edge_kind_probe(params, e) == GeodesicKind::horizontal);

  int vertical = 0;
  for (auto& e : build_polygon({2, 1, PolygonVariant::gamma_prime}))
    vertical += edge_kind_probe(params, e) == GeodesicKind::vertical;
  CHECK(vertical == 1);

  vertical = 0;
  for (auto& e : build_polygon({1, 2, PolygonVariant::gamma_tilde}))
    vertical += edge_kind_probe(params, e) == GeodesicKind::vertical;
  CHECK(vertical == 2);
}

TEST_CASE("build_polygon: edge lengths match the speed quadrature") {
  std::mt19937 rng(61);
  for (auto variant : {PolygonVariant::gamma, PolygonVariant::gamma_prime,
                       PolygonVariant::gamma_tilde}) {
    PolygonSpec spec{2, 1, variant};
    BergerParams params = testutil::random_params(rng);
    for (const auto& e : build_polygon(spec)) {
      CHECK(e.length(params) ==
            doctest::Approx(edge_length_quadrature(params, e)).epsilon(1e-7));
    }
  }
  // vertical distance P1 P2 = (4 tau / kappa) theta (the gamma_tilde v2 edge)
  BergerParams params(1.7, 0.9);
  PolygonSpec spec{2, 1, PolygonVariant::gamma_tilde};
  const auto edges = build_polygon(spec);
  CHECK(edges[3].length(params) ==
        doctest::Approx(4.0 * params.tau / params.kappa * spec.theta())
            .epsilon(1e-9));
  CHECK(edges[1].length(params) ==
        doctest::Approx(4.0 * params.tau / params.kappa * spec.phi()).epsilon(1e-9));
}

TEST_CASE("tetrahedron_faces: stated relations and minimality") {
  PolygonSpec spec{2, 1, PolygonVariant::gamma};
  auto faces = tetrahedron_faces(spec);
  const double th = spec.theta(), ph = spec.phi();
  const Isometry rho_th = Isometry::unitary_diag(th, 0.0);
  const Isometry swap = Isometry::swap_zw();
  const Isometry rho_ph = Isometry::unitary_diag(0.0, ph);
  for (double t = 0.1; t < M_PI / 2; t += 0.3) {
    for (double s = 0.05; s < ph; s += 0.17) {
      CHECK((faces[1].eval(t, s) - rho_th.apply_vec(faces[0].eval(t, s))).norm() <
            1e-14);
    }
    for (double s = 0.05; s < th; s += 0.17) {
      CHECK((faces[2].eval(t, s) - swap.apply_vec(from_zw(
                                       Complex(std::cos(t), 0),
                                       std::sin(t) * std::polar(1.0, s))))
                .norm() < 1e-14);
      CHECK((faces[3].eval(t, s) - rho_ph.apply_vec(faces[2].eval(t, s))).norm() <
            1e-14);
    }
  }
  std::mt19937 rng(62);
  std::uniform_real_distribution<double> ut(0.15, M_PI / 2 - 0.15);
  for (int i = 0; i < 4; ++i) {
    BergerParams params = testutil::random_params(rng);
    std::uniform_real_distribution<double> us(0.1, (i < 2 ? ph : th) - 0.1);
    double worst = 0.0;
    for (int k = 0; k < 8; ++k)
      worst = std::max(worst, std::abs(mean_curvature_berger_direct(
                                  params, faces[i], ut(rng), us(rng))));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("init_mesh: counts, disk topology, boundary constraints") {
  PolygonSpec spec{1, 1, PolygonVariant::gamma};
  auto edges = build_polygon(spec);
  const int res = 12;
  TriMesh mesh = init_mesh(edges, res);
  CHECK(euler_characteristic(mesh) == 1);
  int nbnd = 0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    if (mesh.boundary[v].is_boundary()) ++nbnd;
  CHECK(nbnd == 4 * res);
  for (const Vec4& p : mesh.vertices)
    CHECK(std::abs(p.squaredNorm() - 1.0) < 1e-12);
  validate_mesh(mesh);
  validate_against_edges(mesh, edges, 1e-12);
  CHECK_THROWS_AS((void)init_mesh(edges, 1), std::invalid_argument);
}

TEST_CASE("berger_area: analytic patches in the round case") {
  BergerParams round(4.0, 1.0);
  // the face Phi_1 over [0,pi/2] x [0,phi] has round area phi
  PolygonSpec spec{1, 2, PolygonVariant::gamma};
  auto faces = tetrahedron_faces(spec);
  TriMesh mesh = mesh_from_patch(faces[0], 48, 48);
  CHECK(berger_area(round, mesh) == doctest::Approx(spec.phi()).epsilon(0.01));

  // whole equator sphere: area 4 pi
  TriMesh sphere = mesh_from_patch(equator(), 64, 64);
  CHECK(berger_area(round, sphere) == doctest::Approx(4 * M_PI).epsilon(0.01));
}

TEST_CASE("berger_area: isometry invariance and O(h^2) convergence") {
  std::mt19937 rng(63);
  BergerParams params(1.8, 0.7);
  PolygonSpec spec{1, 1, PolygonVariant::gamma};
  TriMesh mesh = init_mesh(build_polygon(spec), 10);
  const double base = berger_area(params, mesh);
  for (int i = 0; i < 8; ++i) {
    const Isometry iso = testutil::random_isometry(rng);
    CHECK(std::abs(berger_area(params, transform_mesh(mesh, iso)) - base) < 1e-10);
  }

  // refinement study against a fine-mesh reference on the Phi_1 patch
  auto faces = tetrahedron_faces(spec);
  const double ref = berger_area(params, mesh_from_patch(faces[0], 192, 192));
  double err[3];
  int res[3] = {12, 24, 48};
  for (int k = 0; k < 3; ++k)
    err[k] =
        std::abs(berger_area(params, mesh_from_patch(faces[0], res[k], res[k])) - ref);
  const double order1 = std::log2(err[0] / err[1]);
  const double order2 = std::log2(err[1] / err[2]);
  CHECK(order1 > 1.6);
  CHECK(order2 > 1.6);
}

TEST_CASE("area_gradient: matches finite differences") {
  std::mt19937 rng(64);
  PolygonSpec spec{1, 1, PolygonVariant::gamma};
  TriMesh mesh = init_mesh(build_polygon(spec), 4);
  for (const BergerParams& params :
       {BergerParams(4.0, 1.0), BergerParams(1.7, 0.9), BergerParams(3.1, 0.45)}) {
    const std::vector<Vec4> grad = area_gradient(params, mesh);
    const double h = 1e-7;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(mesh.vertices.size()) - 1);
    for (int trial = 0; trial < 12; ++trial) {
      const int v = pick(rng);
      for (int coord = 0; coord < 4; ++coord) {
        TriMesh plus = mesh, minus = mesh;
        plus.vertices[v][coord] += h;
        minus.vertices[v][coord] -= h;
        const double fd =
            (berger_area(params, plus) - berger_area(params, minus)) / (2 * h);
        CHECK(grad[v][coord] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
      }
    }
  }
}

TEST_CASE("minimize_area: a sampled minimal face stays put") {
  BergerParams params(2.2, 0.9);
  PolygonSpec spec{1, 1, PolygonVariant::gamma};
  auto faces = tetrahedron_faces(spec);
  TriMesh mesh = mesh_from_patch(faces[0], 16, 16);
  SolveOptions opts;
  opts.max_iter = 4000;
  auto [solved, report] = minimize_area(params, mesh, opts);
  CHECK(report.area <= berger_area(params, mesh) + 1e-12);
  double moved = 0.0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    moved = std::max(moved, (solved.vertices[v] - mesh.vertices[v]).norm());
  CHECK(moved < 0.006);  // the discrete minimizer is O(h^2) from the sample
}

TEST_CASE("minimize_area: area decreases, boundary fixed, gradient shrinks") {
  BergerParams params(1.5, 1.1);
  PolygonSpec spec{1, 1, PolygonVariant::gamma};
  auto edges = build_polygon(spec);
  TriMesh mesh = init_mesh(edges, 12);
  const double area0 = berger_area(params, mesh);
  SolveOptions opts;
  opts.max_iter = 3000;
  opts.grad_tol = 1e-7;
  auto [solved, report] = minimize_area(params, mesh, opts);
  CHECK(report.area < area0);
  CHECK(report.grad_norm <= 1e-7);
  CHECK(report.converged);
  CHECK(report.mean_curvature_residual < 1e-3);
  validate_against_edges(solved, edges, 1e-12);  // boundary untouched
  CHECK(region_violation(spec, solved) < 1e-6);  // stays inside W
}

TEST_CASE("minimize_area: equivariance under a polygon reflection") {
  BergerParams params(2.0, 0.8);
  PolygonSpec spec{2, 1, PolygonVariant::gamma};
  auto edges = build_polygon(spec);
  // reflect the whole polygon by the reflection across its first edge
  const Isometry r = edges[0].reflection;
  std::vector<GeodesicEdge> redges;
  for (const auto& e : edges) redges.push_back(transformed_edge(e, r));

  SolveOptions opts;
  opts.max_iter = 600;
  opts.grad_tol = 1e-6;
  auto [sol1, rep1] = minimize_area(params, init_mesh(edges, 10), opts);
  auto [sol2, rep2] = minimize_area(params, init_mesh(redges, 10), opts);
  REQUIRE(sol1.vertices.size() == sol2.vertices.size());
  double worst = 0.0;
  for (std::size_t v = 0; v < sol1.vertices.size(); ++v)
    worst = std::max(worst,
                     (sol2.vertices[v] - Vec4(r.matrix * sol1.vertices[v])).norm());
  CHECK(worst < 1e-6);
}

TEST_CASE("minimize_area: Remark-4(1) polygon converges to the Phi_1 image") {
  BergerParams params(2.0, 1.0);
  PolygonSpec spec{1, 1, PolygonVariant::gamma_tilde};
  auto edges = build_polygon(spec);
  TriMesh mesh = init_mesh(edges, 16);
  SolveOptions opts;
  opts.max_iter = 4000;
  opts.grad_tol = 1e-6;
  auto [solved, report] = minimize_area(params, mesh, opts);
  double worst = 0.0;
  for (const Vec4& p : solved.vertices)
    worst = std::max(worst, distance_to_phi1(p));
  // diameter of the piece is about pi/2; stay well under 2%
  CHECK(worst < 0.02 * (M_PI / 2));
}
