#include "berger/geodesics.hpp"

#include <cmath>

namespace berger {

double GeodesicSpec::lambda(const BergerParams& params) const {
  const double st = std::sin(theta), ct = std::cos(theta);
  return std::sqrt(st * st + 4.0 * params.tau * params.tau / params.kappa * ct * ct);
}

// z1(s) = e^{i omega s} [cos(mu s) + i A sin(mu s)]
// z2(s) = e^{i (phi + omega s)} (sin(theta)/lambda) sin(mu s)
// omega = (kappa - 4 tau^2)/(4 tau) cos(theta), mu = lambda sqrt(kappa)/2,
// A = (2 tau / sqrt(kappa)) cos(theta) / lambda
namespace {
struct GeodesicTerms {
  double omega, mu, A, B, phi;
};

GeodesicTerms terms(const BergerParams& params, const GeodesicSpec& spec) {
  const double lam = spec.lambda(params);
  GeodesicTerms t;
  t.omega = (params.kappa - 4.0 * params.tau * params.tau) / (4.0 * params.tau) *
            std::cos(spec.theta);
  t.mu = lam * std::sqrt(params.kappa) / 2.0;
  t.A = 2.0 * params.tau / std::sqrt(params.kappa) * std::cos(spec.theta) / lam;
  t.B = std::sin(spec.theta) / lam;
  t.phi = spec.phi;
  return t;
}
}  // namespace

SpherePoint geodesic_point(const BergerParams& params, const GeodesicSpec& spec,
                           double s) {
  const GeodesicTerms t = terms(params, spec);
  const Complex e1 = std::polar(1.0, t.omega * s);
  const Complex e2 = std::polar(1.0, t.phi + t.omega * s);
  const double c = std::cos(t.mu * s), sn = std::sin(t.mu * s);
  const Complex z1 = e1 * Complex(c, t.A * sn);
  const Complex z2 = e2 * (t.B * sn);
  return SpherePoint::project(from_zw(z1, z2));
}

TangentVector geodesic_velocity(const BergerParams& params,
                                const GeodesicSpec& spec, double s) {
  const GeodesicTerms t = terms(params, spec);
  const Complex i(0.0, 1.0);
  const Complex e1 = std::polar(1.0, t.omega * s);
  const Complex e2 = std::polar(1.0, t.phi + t.omega * s);
  const double c = std::cos(t.mu * s), sn = std::sin(t.mu * s);
  const Complex z1 = e1 * Complex(c, t.A * sn);
  const Complex z2 = e2 * (t.B * sn);
  const Complex dz1 = i * t.omega * z1 + e1 * Complex(-t.mu * sn, t.A * t.mu * c);
  const Complex dz2 = i * t.omega * z2 + e2 * (t.B * t.mu * c);
  TangentVector out;
  out.base = SpherePoint::project(from_zw(z1, z2));
  out.vec = tangential(out.base.coords, from_zw(dz1, dz2));
  return out;
}

SpherePoint geodesic_point_at(const BergerParams& params, const SpherePoint& base,
                              const GeodesicSpec& spec, double s) {
  const Isometry M = Isometry::su2(base.z(), base.w());
  return M.apply(geodesic_point(params, spec, s));
}

std::pair<double, double> geodesic_lengths(const BergerParams& params) {
  return {8.0 * M_PI * std::abs(params.tau) / params.kappa,
          4.0 * M_PI / std::sqrt(params.kappa)};
}

SpherePoint horizontal_geodesic(const BergerParams& params, double phi, double s) {
  const double a = std::sqrt(params.kappa) / 2.0 * s;
  return SpherePoint::project(
      from_zw(Complex(std::cos(a), 0.0), std::polar(std::sin(a), phi)));
}

SpherePoint vertical_geodesic(const BergerParams& params, double s) {
  const double a = params.kappa / (4.0 * params.tau) * s;
  return SpherePoint::project(from_zw(std::polar(1.0, a), Complex(0.0, 0.0)));
}

SpherePoint reflect_vertical(const SpherePoint& p) {
  return SpherePoint::project(from_zw(p.z(), -p.w()));
}

Isometry vertical_reflection() { return Isometry::unitary_diag(0.0, M_PI); }

SpherePoint reflect_horizontal(double phi, const SpherePoint& p) {
  return SpherePoint::project(
      from_zw(std::conj(p.z()), std::polar(1.0, 2.0 * phi) * std::conj(p.w())));
}

Isometry horizontal_reflection(double phi) {
  return Isometry::conj_diag(0.0, 2.0 * phi);
}

GeodesicKind classify(const BergerParams& params, const TangentVector& v0,
                      double tol) {
  (void)params;  // the classification only uses round inner products with V
  const double n = v0.vec.norm();
  if (n < 1e-14) throw std::invalid_argument("classify: zero initial velocity");
  const Vec4 V = hopf_field(v0.base.coords);
  const double along = v0.vec.dot(V);
  const double ortho = (v0.vec - along * V).norm();
  if (std::abs(along) <= tol * n) return GeodesicKind::horizontal;
  if (ortho <= tol * n) return GeodesicKind::vertical;
  return GeodesicKind::generic;
}

}  // namespace berger
