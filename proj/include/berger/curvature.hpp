#pragma once

#include "berger/families.hpp"

// Normals, mean curvature in the round and Berger metrics, the relation
//
//   H^b = (sqrt(k)/2) (1 - (1 - k/4t^2) nu^2)^{-1/2}
//           [ H + (1 - k/4t^2) <grad nu, V> / (2 (1 - (1 - k/4t^2) nu^2)) ]
//
// between them (nu = <N, V> in the round metric), and shape operators.
//
// All pointwise operations use the normal orientation N ~ -cross4(Phi,
// Phi_s, Phi_t); every quantity of one sample is computed from the same N,
// so the relation above is checked sign-consistently.

namespace berger {

struct CurvatureSample {
  double s = 0, t = 0;
  Vec4 N = Vec4::Zero();      // round unit normal
  Vec4 N_b = Vec4::Zero();    // Berger unit normal
  double nu = 0;              // <N, V>
  double H = 0;               // round mean curvature
  double H_b = 0;             // Berger mean curvature (direct computation)
  double H_b_lemma = 0;       // Berger mean curvature through the relation
  double grad_nu_dot_V = 0;   // <grad nu, V>, round gradient
  Mat2 S = Mat2::Zero();      // shape operator -nabla^b N^b, orthonormal frame
};

// round unit normal at a regular point; throws std::runtime_error when the
// partials are linearly dependent
TangentVector round_normal(const ParamSurface& surf, double s, double t);

// N^b from N; unit for the Berger metric, orthogonal to the surface
TangentVector berger_normal(const BergerParams& params, const ParamSurface& surf,
                            double s, double t);

double mean_curvature_round(const ParamSurface& surf, double s, double t);

// the displayed relation, as a pure function of its inputs
double mean_curvature_berger_lemma(const BergerParams& params, double H, double nu,
                                   double grad_nu_dot_V);

// -2 H^b = sum g(nabla^b_{E_i} N^b, E_i) over a Berger-orthonormal frame
double mean_curvature_berger_direct(const BergerParams& params,
                                    const ParamSurface& surf, double s, double t);

// <grad nu, V> with the round surface gradient of nu
double grad_nu_dot_v(const ParamSurface& surf, double s, double t);

// matrix of -nabla^b N^b on the tangent plane in a Berger-orthonormal frame;
// symmetric up to discretization error, trace = 2 H^b
Mat2 shape_operator(const BergerParams& params, const ParamSurface& surf, double s,
                    double t);

// everything above at once, from a single normal orientation
CurvatureSample curvature_sample(const BergerParams& params,
                                 const ParamSurface& surf, double s, double t);

}  // namespace berger
