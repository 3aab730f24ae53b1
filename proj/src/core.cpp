#include "berger/core.hpp"

#include <cmath>

namespace berger {

Mat4 complex_structure() {
  Mat4 J = Mat4::Zero();
  J(0, 1) = -1.0;
  J(1, 0) = 1.0;
  J(2, 3) = -1.0;
  J(3, 2) = 1.0;
  return J;
}

Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
  auto det3 = [](double a0, double a1, double a2, double b0, double b1, double b2,
                 double c0, double c1, double c2) {
    return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) +
           a2 * (b0 * c1 - b1 * c0);
  };
  Vec4 n;
  n[0] = -det3(a[1], b[1], c[1], a[2], b[2], c[2], a[3], b[3], c[3]);
  n[1] = det3(a[0], b[0], c[0], a[2], b[2], c[2], a[3], b[3], c[3]);
  n[2] = -det3(a[0], b[0], c[0], a[1], b[1], c[1], a[3], b[3], c[3]);
  n[3] = det3(a[0], b[0], c[0], a[1], b[1], c[1], a[2], b[2], c[2]);
  return n;
}

BergerParams::BergerParams(double kappa_, double tau_) : kappa(kappa_), tau(tau_) {
  if (!(kappa > 0.0)) throw std::invalid_argument("BergerParams: kappa must be > 0");
  if (tau == 0.0) throw std::invalid_argument("BergerParams: tau must be nonzero");
}

SpherePoint SpherePoint::make(const Vec4& p) {
  if (std::abs(p.squaredNorm() - 1.0) > 1e-12)
    throw std::invalid_argument("SpherePoint: |p|^2 - 1 exceeds 1e-12");
  SpherePoint out;
  out.coords = p;
  return out;
}

SpherePoint SpherePoint::project(const Vec4& p) {
  double n = p.norm();
  if (n < 1e-14) throw std::invalid_argument("SpherePoint: cannot project zero vector");
  SpherePoint out;
  out.coords = p / n;
  return out;
}

TangentVector TangentVector::make(const SpherePoint& base, const Vec4& vec) {
  if (std::abs(vec.dot(base.coords)) > 1e-10)
    throw std::invalid_argument("TangentVector: not orthogonal to base point");
  TangentVector out;
  out.base = base;
  out.vec = vec;
  return out;
}

static Eigen::Matrix2d rot2(double a) {
  Eigen::Matrix2d R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

Isometry Isometry::from_matrix(const Mat4& A) {
  if ((A.transpose() * A - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("Isometry: matrix is not orthogonal");
  const Mat4 J = complex_structure();
  const Mat4 comm = A * J - J * A;
  const Mat4 anti = A * J + J * A;
  Isometry out;
  out.matrix = A;
  if (comm.cwiseAbs().maxCoeff() <= 1e-12) {
    out.sign = +1;
  } else if (anti.cwiseAbs().maxCoeff() <= 1e-12) {
    out.sign = -1;
  } else {
    throw std::invalid_argument("Isometry: A J != +- J A");
  }
  return out;
}

Isometry Isometry::identity() { return Isometry{}; }

Isometry Isometry::unitary_diag(double alpha, double beta) {
  Mat4 A = Mat4::Zero();
  A.block<2, 2>(0, 0) = rot2(alpha);
  A.block<2, 2>(2, 2) = rot2(beta);
  Isometry out;
  out.matrix = A;
  out.sign = +1;
  return out;
}

Isometry Isometry::conj_diag(double alpha, double beta) {
  Eigen::Matrix2d C;
  C << 1, 0, 0, -1;
  Mat4 A = Mat4::Zero();
  A.block<2, 2>(0, 0) = rot2(alpha) * C;
  A.block<2, 2>(2, 2) = rot2(beta) * C;
  Isometry out;
  out.matrix = A;
  out.sign = -1;
  return out;
}

Isometry Isometry::su2(Complex a, Complex b) {
  double n = std::sqrt(std::norm(a) + std::norm(b));
  if (n < 1e-14) throw std::invalid_argument("Isometry::su2: zero column");
  a /= n;
  b /= n;
  // (z,w) -> (a z - conj(b) w, b z + conj(a) w), as real 2x2 blocks
  auto cblock = [](Complex c) {
    Eigen::Matrix2d M;
    M << c.real(), -c.imag(), c.imag(), c.real();
    return M;
  };
  Mat4 A = Mat4::Zero();
  A.block<2, 2>(0, 0) = cblock(a);
  A.block<2, 2>(0, 2) = cblock(-std::conj(b));
  A.block<2, 2>(2, 0) = cblock(b);
  A.block<2, 2>(2, 2) = cblock(std::conj(a));
  Isometry out;
  out.matrix = A;
  out.sign = +1;
  return out;
}

Isometry Isometry::swap_zw() {
  Mat4 A = Mat4::Zero();
  A(0, 2) = A(1, 3) = A(2, 0) = A(3, 1) = 1.0;
  Isometry out;
  out.matrix = A;
  out.sign = +1;
  return out;
}

Isometry Isometry::compose(const Isometry& rhs) const {
  Isometry out;
  out.matrix = matrix * rhs.matrix;
  out.sign = sign * rhs.sign;
  return out;
}

Isometry Isometry::inverse() const {
  Isometry out;
  out.matrix = matrix.transpose();
  out.sign = sign;
  return out;
}

bool Isometry::is_involution(double tol) const {
  return ((matrix * matrix) - Mat4::Identity()).cwiseAbs().maxCoeff() <= tol;
}

double metric_at(const BergerParams& params, const Vec4& p, const Vec4& X,
                 const Vec4& Y) {
  const Vec4 V = hopf_field(p);
  return 4.0 / params.kappa *
         (X.dot(Y) + params.hopf_coeff() * X.dot(V) * Y.dot(V));
}

double metric(const BergerParams& params, const TangentVector& X,
              const TangentVector& Y) {
  if ((X.base.coords - Y.base.coords).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("metric: tangent vectors at different base points");
  return metric_at(params, X.base.coords, X.vec, Y.vec);
}

Vec4 berger_correction(const BergerParams& params, const Vec4& p, const Vec4& X,
                       const Vec4& Y) {
  const Vec4 V = hopf_field(p);
  const double c = params.hopf_coeff();
  return c * (Y.dot(V) * tangential(p, jmul(X)) + X.dot(V) * tangential(p, jmul(Y)));
}

TangentVector connection(const BergerParams& params, const VectorField& X,
                         const VectorField& Y, const SpherePoint& p) {
  const Vec4 Xp = X(p.coords);
  const Vec4 Yp = Y(p.coords);
  if (std::abs(Xp.dot(p.coords)) > 1e-8 || std::abs(Yp.dot(p.coords)) > 1e-8)
    throw std::invalid_argument("connection: field values not tangent at p");

  const double h = 1e-5;
  const Vec4 plus = (p.coords + h * Xp).normalized();
  const Vec4 minus = (p.coords - h * Xp).normalized();
  const Vec4 dY = (Y(plus) - Y(minus)) / (2.0 * h);

  Vec4 cov = tangential(p.coords, dY) + berger_correction(params, p.coords, Xp, Yp);
  // the FD stencil leaves an O(h) radial residue; strip it
  cov = tangential(p.coords, cov);
  TangentVector out;
  out.base = p;
  out.vec = cov;
  return out;
}

Vec3 hopf_projection(const BergerParams& params, const SpherePoint& p) {
  const Complex z = p.z();
  const Complex w = p.w();
  const Complex zw = z * std::conj(w);
  const double s = 2.0 / std::sqrt(params.kappa);
  return Vec3(s * zw.real(), s * zw.imag(),
              (std::norm(z) - std::norm(w)) / std::sqrt(params.kappa));
}

}  // namespace berger
