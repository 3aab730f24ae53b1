#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "berger/geodesics.hpp"
#include "test_util.hpp"

using namespace berger;
using namespace berger::testutil;

TEST_CASE("geodesic_point: starts at (1,0) and stays on S^3") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> uth(0.0, M_PI), uph(0.0, 2 * M_PI),
      us(-8.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    BergerParams params = random_params(rng);
    GeodesicSpec spec{uth(rng), uph(rng)};
    CHECK((geodesic_point(params, spec, 0.0).coords - Vec4(1, 0, 0, 0)).norm() <
          1e-14);
    const Vec4 p = geodesic_point(params, spec, us(rng)).coords;
    CHECK(std::abs(p.squaredNorm() - 1.0) < 1e-12);
  }
}

TEST_CASE("geodesic_point: theta = pi/2 reproduces h_phi") {
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> uph(0.0, 2 * M_PI), us(-6.0, 6.0);
  for (int i = 0; i < 100; ++i) {
    BergerParams params = random_params(rng);
    const double phi = uph(rng), s = us(rng);
    GeodesicSpec spec{M_PI / 2, phi};
    const Vec4 a = geodesic_point(params, spec, s).coords;
    const Vec4 b = horizontal_geodesic(params, phi, s).coords;
    CHECK((a - b).norm() < 1e-12);
  }
}

TEST_CASE("geodesic_point: theta = 0 reproduces the vertical geodesic") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> us(-6.0, 6.0);
  for (int i = 0; i < 100; ++i) {
    BergerParams params = random_params(rng);
    const double s = us(rng);
    GeodesicSpec spec{0.0, 0.0};
    const Vec4 a = geodesic_point(params, spec, s).coords;
    const Vec4 b = vertical_geodesic(params, s).coords;
    CHECK((a - b).norm() < 1e-12);
  }
}

TEST_CASE("geodesic_lengths: closed-form periods") {
  auto [v1, h1] = geodesic_lengths(BergerParams(4.0, 1.0));
  CHECK(v1 == doctest::Approx(2 * M_PI).epsilon(1e-14));
  CHECK(h1 == doctest::Approx(2 * M_PI).epsilon(1e-14));
  auto [v2, h2] = geodesic_lengths(BergerParams(1.0, 1.0));
  CHECK(v2 == doctest::Approx(8 * M_PI).epsilon(1e-14));
  CHECK(h2 == doctest::Approx(4 * M_PI).epsilon(1e-14));
}

TEST_CASE("geodesic_lengths: closure at the period") {
  std::mt19937 rng(24);
  for (int i = 0; i < 50; ++i) {
    BergerParams params = random_params(rng);
    auto [vlen, hlen] = geodesic_lengths(params);
    const Vec4 one(1, 0, 0, 0);
    CHECK((geodesic_point(params, {0.0, 0.0}, vlen).coords - one).norm() < 1e-9);
    std::uniform_real_distribution<double> uph(0.0, 2 * M_PI);
    CHECK((geodesic_point(params, {M_PI / 2, uph(rng)}, hlen).coords - one).norm() <
          1e-9);
  }
}

TEST_CASE("geodesic velocity: unit speed, constant along the orbit") {
  std::mt19937 rng(25);
  std::uniform_real_distribution<double> uth(0.05, M_PI - 0.05), uph(0.0, 2 * M_PI);
  for (int i = 0; i < 40; ++i) {
    BergerParams params = random_params(rng);
    GeodesicSpec spec{uth(rng), uph(rng)};
    auto [vlen, hlen] = geodesic_lengths(params);
    const double period = std::max(vlen, hlen);
    for (int k = 0; k <= 10; ++k) {
      TangentVector v = geodesic_velocity(params, spec, period * k / 10.0);
      const double speed = metric_at(params, v.base.coords, v.vec, v.vec);
      CHECK(std::abs(speed - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("geodesic equation residual under finite differences") {
  std::mt19937 rng(26);
  std::uniform_real_distribution<double> uth(0.0, M_PI), uph(0.0, 2 * M_PI),
      us(-4.0, 4.0);
  for (int i = 0; i < 60; ++i) {
    BergerParams params = random_params(rng);
    GeodesicSpec spec{uth(rng), uph(rng)};
    const double s = us(rng);
    const double h = 1e-6;
    const Vec4 gp = geodesic_point(params, spec, s).coords;
    const Vec4 acc = (geodesic_velocity(params, spec, s + h).vec -
                      geodesic_velocity(params, spec, s - h).vec) /
                     (2.0 * h);
    const Vec4 vel = geodesic_velocity(params, spec, s).vec;
    const Vec4 resid =
        tangential(gp, acc) + berger_correction(params, gp, vel, vel);
    CHECK(resid.norm() < 1e-6);
  }
}

TEST_CASE("angle between horizontal geodesics at (1,0) is phi1 - phi2") {
  std::mt19937 rng(27);
  std::uniform_real_distribution<double> uph(0.0, M_PI);
  for (int i = 0; i < 50; ++i) {
    BergerParams params = random_params(rng);
    const double p1 = uph(rng), p2 = uph(rng);
    TangentVector v1 = geodesic_velocity(params, {M_PI / 2, p1}, 0.0);
    TangentVector v2 = geodesic_velocity(params, {M_PI / 2, p2}, 0.0);
    const double c = metric_at(params, v1.base.coords, v1.vec, v2.vec);
    CHECK(std::acos(std::clamp(c, -1.0, 1.0)) ==
          doctest::Approx(std::abs(p1 - p2)).epsilon(1e-9));
  }
}

TEST_CASE("reflect_vertical: fixed point, involution, isometry") {
  SpherePoint one = SpherePoint::make(Vec4(1, 0, 0, 0));
  CHECK((reflect_vertical(one).coords - one.coords).norm() < 1e-15);

  std::mt19937 rng(28);
  for (int i = 0; i < 100; ++i) {
    SpherePoint p = random_point(rng);
    CHECK((reflect_vertical(reflect_vertical(p)).coords - p.coords).norm() < 1e-15);
  }
  Isometry rv = vertical_reflection();
  CHECK(rv.is_involution());
  for (int i = 0; i < 200; ++i) {
    BergerParams params = random_params(rng);
    SpherePoint p = random_point(rng);
    Vec4 x = random_tangent(rng, p.coords);
    Vec4 y = random_tangent(rng, p.coords);
    const double g0 = metric_at(params, p.coords, x, y);
    const double g1 = metric_at(params, rv.apply(p).coords, rv.apply_vec(x),
                                rv.apply_vec(y));
    CHECK(std::abs(g1 - g0) < 1e-12 * std::max(1.0, std::abs(g0)));
  }
  // fixes the vertical geodesic through (1,0) pointwise
  BergerParams params(1.7, 0.6);
  for (int k = 0; k <= 12; ++k) {
    SpherePoint p = vertical_geodesic(params, 0.5 * k);
    CHECK((reflect_vertical(p).coords - p.coords).norm() < 1e-14);
  }
}

TEST_CASE("reflect_horizontal: phi = 0 is plain conjugation") {
  std::mt19937 rng(29);
  for (int i = 0; i < 50; ++i) {
    SpherePoint p = random_point(rng);
    SpherePoint q = reflect_horizontal(0.0, p);
    CHECK(std::abs(q.z() - std::conj(p.z())) < 1e-15);
    CHECK(std::abs(q.w() - std::conj(p.w())) < 1e-15);
  }
}

TEST_CASE("reflect_horizontal: composition of two reflections is a rotation") {
  std::mt19937 rng(30);
  std::uniform_real_distribution<double> uph(0.0, 2 * M_PI);
  for (int i = 0; i < 50; ++i) {
    const double p1 = uph(rng), p2 = uph(rng);
    SpherePoint p = random_point(rng);
    SpherePoint q = reflect_horizontal(p2, reflect_horizontal(p1, p));
    // (z, w) -> (z, e^{2i(p2-p1)} w)
    CHECK(std::abs(q.z() - p.z()) < 1e-14);
    CHECK(std::abs(q.w() - std::polar(1.0, 2.0 * (p2 - p1)) * p.w()) < 1e-14);
  }
}

TEST_CASE("reflect_horizontal: h_phi fixed pointwise, pullback below 1e-12") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uph(0.0, 2 * M_PI);
  for (int trial = 0; trial < 10; ++trial) {
    BergerParams params = random_params(rng);
    const double phi = uph(rng);
    for (int k = 0; k <= 16; ++k) {
      SpherePoint p = horizontal_geodesic(params, phi, 0.45 * k);
      CHECK((reflect_horizontal(phi, p).coords - p.coords).norm() < 1e-13);
    }
    Isometry R = horizontal_reflection(phi);
    CHECK(R.is_involution());
    CHECK(R.sign == -1);
    for (int i = 0; i < 20; ++i) {
      SpherePoint p = random_point(rng);
      Vec4 x = random_tangent(rng, p.coords);
      Vec4 y = random_tangent(rng, p.coords);
      const double g0 = metric_at(params, p.coords, x, y);
      const double g1 =
          metric_at(params, R.apply(p).coords, R.apply_vec(x), R.apply_vec(y));
      CHECK(std::abs(g1 - g0) < 1e-12 * std::max(1.0, std::abs(g0)));
    }
  }
}

TEST_CASE("classify: vertical, horizontal, generic, zero") {
  BergerParams params(2.2, 0.8);
  SpherePoint one = SpherePoint::make(Vec4(1, 0, 0, 0));
  TangentVector v = TangentVector::make(one, hopf_field(one.coords));
  CHECK(classify(params, v) == GeodesicKind::vertical);

  const double phi = 0.7;
  TangentVector h =
      TangentVector::make(one, Vec4(0, 0, std::cos(phi), std::sin(phi)));
  CHECK(classify(params, h) == GeodesicKind::horizontal);

  TangentVector g = geodesic_velocity(params, {M_PI / 4, 0.3}, 0.0);
  CHECK(classify(params, g) == GeodesicKind::generic);

  TangentVector z;
  z.base = one;
  CHECK_THROWS_AS((void)classify(params, z), std::invalid_argument);
}

TEST_CASE("geodesic_point_at: conjugated curve starts at the base point") {
  std::mt19937 rng(32);
  for (int i = 0; i < 30; ++i) {
    BergerParams params = random_params(rng);
    SpherePoint base = random_point(rng);
    const Vec4 q = geodesic_point_at(params, base, {0.4, 1.2}, 0.0).coords;
    CHECK((q - base.coords).norm() < 1e-12);
    const Vec4 far = geodesic_point_at(params, base, {0.4, 1.2}, 1.5).coords;
    CHECK(std::abs(far.squaredNorm() - 1.0) < 1e-12);
  }
}
