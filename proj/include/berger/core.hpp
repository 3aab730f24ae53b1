#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <stdexcept>

// Berger sphere ambient geometry.
//
// The 3-sphere S^3 = {(z,w) in C^2 : |z|^2 + |w|^2 = 1} is stored in R^4 with
// the packing (z, w) = (x0 + i*x1, x2 + i*x3).  The Berger metric on S^3 is
//
//   g(X, Y) = (4/kappa) [ <X,Y> + (4 tau^2/kappa - 1) <X,V> <Y,V> ]
//
// where <,> is the Euclidean inner product of R^4 restricted to the sphere
// and V_(z,w) = (iz, iw) is the Hopf field.  kappa > 0 deforms the base,
// tau != 0 the Hopf fiber; kappa = 4 tau^2 recovers (a homothety of) the
// round sphere.

namespace berger {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// complex structure J(z,w) = (iz, iw)

inline Vec4 jmul(const Vec4& v) { return Vec4(-v[1], v[0], -v[3], v[2]); }

Mat4 complex_structure();  // J as a 4x4 matrix

// Hopf field V at p (unit for the round metric).
inline Vec4 hopf_field(const Vec4& p) { return jmul(p); }

inline Complex z_of(const Vec4& v) { return {v[0], v[1]}; }
inline Complex w_of(const Vec4& v) { return {v[2], v[3]}; }
inline Vec4 from_zw(Complex z, Complex w) {
  return Vec4(z.real(), z.imag(), w.real(), w.imag());
}

inline double round_inner(const Vec4& a, const Vec4& b) { return a.dot(b); }

// generalized cross product: the unique n with <n, x> = det[a b c x]
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c);

// component of w orthogonal to p (tangential to S^3 at p when |p| = 1)
inline Vec4 tangential(const Vec4& p, const Vec4& w) { return w - w.dot(p) * p; }

// ---------------------------------------------------------------------------
// parameters and points

struct BergerParams {
  double kappa = 4.0;
  double tau = 1.0;

  BergerParams() = default;
  BergerParams(double kappa_, double tau_);

  bool is_round() const { return std::abs(kappa - 4.0 * tau * tau) < 1e-12; }

  // coefficient (4 tau^2 / kappa - 1) multiplying the Hopf correction
  double hopf_coeff() const { return 4.0 * tau * tau / kappa - 1.0; }
};

struct SpherePoint {
  Vec4 coords = Vec4(1, 0, 0, 0);

  SpherePoint() = default;
  // validates |p| = 1 within 1e-12
  static SpherePoint make(const Vec4& p);
  // projects p/|p| (for numerically constructed points)
  static SpherePoint project(const Vec4& p);

  Complex z() const { return z_of(coords); }
  Complex w() const { return w_of(coords); }
};

struct TangentVector {
  SpherePoint base;
  Vec4 vec = Vec4::Zero();

  TangentVector() = default;
  // validates <vec, base> = 0 within 1e-10
  static TangentVector make(const SpherePoint& base, const Vec4& vec);
};

// ---------------------------------------------------------------------------
// isometries of the Berger sphere: O(4) matrices with A J = sign J A.
// sign = +1 is U+(2) (unitary action on (z,w)); sign = -1 is U-(2), which
// acts through the conjugates (z, w) -> A (conj z, conj w).

struct Isometry {
  Mat4 matrix = Mat4::Identity();
  int sign = +1;

  // validates orthogonality and the J-(anti)commutation invariant
  static Isometry from_matrix(const Mat4& A);

  static Isometry identity();
  // (z,w) -> (e^{i alpha} z, e^{i beta} w)
  static Isometry unitary_diag(double alpha, double beta);
  // (z,w) -> (e^{i alpha} conj z, e^{i beta} conj w)
  static Isometry conj_diag(double alpha, double beta);
  // (z,w) -> (a z - conj(b) w, b z + conj(a) w); maps (1,0) to (a,b)
  static Isometry su2(Complex a, Complex b);
  // (z,w) -> (w,z)
  static Isometry swap_zw();

  SpherePoint apply(const SpherePoint& p) const {
    return SpherePoint::project(matrix * p.coords);
  }
  Vec4 apply_vec(const Vec4& v) const { return matrix * v; }
  Isometry compose(const Isometry& rhs) const;  // this after rhs
  Isometry inverse() const;
  bool is_involution(double tol = 1e-10) const;
};

inline SpherePoint apply_isometry(const Isometry& A, const SpherePoint& p) {
  return A.apply(p);
}

// ---------------------------------------------------------------------------
// metric, connection, Hopf fibration

// g at an arbitrary base point p with raw tangent vectors X, Y
double metric_at(const BergerParams& params, const Vec4& p, const Vec4& X,
                 const Vec4& Y);

// checked variant; throws std::invalid_argument on mismatched base points
double metric(const BergerParams& params, const TangentVector& X,
              const TangentVector& Y);

using VectorField = std::function<Vec4(const Vec4&)>;

// Levi-Civita connection of the Berger metric applied to vector fields,
//
//   nabla^b_X Y = nabla_X Y + (4 tau^2/kappa - 1) [<Y,V>(JX)^T + <X,V>(JY)^T]
//
// with nabla the round connection (tangential part of the flat directional
// derivative, here by central differences with step 1e-5).  Field values at
// the base point must be tangent (checked to 1e-8).
TangentVector connection(const BergerParams& params, const VectorField& X,
                         const VectorField& Y, const SpherePoint& p);

// same correction term given the round derivative nabla_X Y at p
Vec4 berger_correction(const BergerParams& params, const Vec4& p, const Vec4& X,
                       const Vec4& Y);

// Hopf fibration Pi : S^3_b(kappa,tau) -> S^2(kappa), |Pi| = 1/sqrt(kappa)
Vec3 hopf_projection(const BergerParams& params, const SpherePoint& p);

}  // namespace berger
