#pragma once

#include <random>

#include "berger/core.hpp"

// shared generators for randomized tests (fixed seeds, deterministic)

namespace berger::testutil {

inline Vec4 random_unit4(std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Vec4 v;
  do {
    v = Vec4(nd(rng), nd(rng), nd(rng), nd(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline SpherePoint random_point(std::mt19937& rng) {
  return SpherePoint::make(random_unit4(rng));
}

inline Vec4 random_tangent(std::mt19937& rng, const Vec4& p) {
  Vec4 v;
  do {
    v = tangential(p, random_unit4(rng));
  } while (v.norm() < 1e-6);
  return v;
}

inline BergerParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> uk(0.4, 4.0), ut(0.25, 2.0);
  std::bernoulli_distribution flip(0.5);
  double tau = ut(rng);
  if (flip(rng)) tau = -tau;
  return BergerParams(uk(rng), tau);
}

inline Isometry random_isometry(std::mt19937& rng) {
  std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
  std::normal_distribution<double> nd;
  Isometry A = Isometry::su2({nd(rng), nd(rng)}, {nd(rng), nd(rng)});
  A = A.compose(Isometry::unitary_diag(ua(rng), ua(rng)));
  std::bernoulli_distribution flip(0.5);
  if (flip(rng)) A = A.compose(Isometry::conj_diag(ua(rng), ua(rng)));
  if (flip(rng)) A = A.compose(Isometry::swap_zw());
  return A;
}

}  // namespace berger::testutil
