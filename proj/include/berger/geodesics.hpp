#pragma once

#include "berger/core.hpp"

// Closed-form geodesics of S^3_b(kappa, tau) through (1,0), their
// horizontal/vertical classification, and the geodesic reflections that are
// ambient isometries.

namespace berger {

// Geodesic through (1,0) with Berger-unit initial speed
//   w = ( i (kappa/4tau) cos(theta), (sqrt(kappa)/2) sin(theta) e^{i phi} ),
// theta in [0, pi] the angle to the vertical direction, phi the phase.
struct GeodesicSpec {
  double theta = M_PI / 2;
  double phi = 0.0;

  // lambda^2 = sin^2 theta + (4 tau^2/kappa) cos^2 theta > 0
  double lambda(const BergerParams& params) const;
};

enum class GeodesicKind { horizontal, vertical, generic };

// evaluate the explicit (z1(s), z2(s)) closed form; lands on S^3 to 1e-12
SpherePoint geodesic_point(const BergerParams& params, const GeodesicSpec& spec,
                           double s);

// analytic derivative of the closed form
TangentVector geodesic_velocity(const BergerParams& params,
                                const GeodesicSpec& spec, double s);

// same geodesic family moved to an arbitrary base point by an SU(2) element
// taking (1,0) to base
SpherePoint geodesic_point_at(const BergerParams& params, const SpherePoint& base,
                              const GeodesicSpec& spec, double s);

// (vertical period, horizontal period) = (8 pi |tau| / kappa, 4 pi / sqrt(kappa))
std::pair<double, double> geodesic_lengths(const BergerParams& params);

// horizontal geodesic h_phi(s) = (cos(sqrt(k)/2 s), sin(sqrt(k)/2 s) e^{i phi})
SpherePoint horizontal_geodesic(const BergerParams& params, double phi, double s);
// vertical geodesic v(s) = (e^{i kappa s / 4 tau}, 0)
SpherePoint vertical_geodesic(const BergerParams& params, double s);

// geodesic reflection across the vertical geodesic through (1,0):
// r_v(z,w) = (z, -w)
SpherePoint reflect_vertical(const SpherePoint& p);
Isometry vertical_reflection();

// geodesic reflection across the horizontal geodesic h_phi:
// R_phi(z,w) = (conj z, e^{2 i phi} conj w)
SpherePoint reflect_horizontal(double phi, const SpherePoint& p);
Isometry horizontal_reflection(double phi);

// classify an initial velocity by its round inner products with V at the base
GeodesicKind classify(const BergerParams& params, const TangentVector& v0,
                      double tol = 1e-10);

}  // namespace berger
