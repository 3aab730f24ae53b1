#pragma once

#include <memory>
#include <vector>

#include "berger/core.hpp"
#include "berger/mesh.hpp"

// Explicit minimal immersions in the Berger spheres: the equator, the
// Clifford torus, the one-parameter family Phi_c that is minimal for every
// (kappa, tau), the Lawson surfaces tau_{m,n} = Phi_{m/n}, and the family
// Psi_{a,b} obtained by integrating the sinh-Gordon equation.

namespace berger {

// ---------------------------------------------------------------------------
// a twice-differentiable immersion patch (s,t) -> S^3

struct ParamSurface {
  std::function<Vec4(double, double)> eval;
  // analytic partials; second-order entries may be empty, in which case
  // consumers fall back to finite differences
  std::function<Vec4(double, double)> d_s, d_t, d_ss, d_st, d_tt;
  double s_min = 0.0, s_max = 1.0, t_min = 0.0, t_max = 1.0;
  bool periodic_s = false, periodic_t = false;

  bool has_analytic_first() const { return static_cast<bool>(d_s); }
  bool has_analytic_second() const { return static_cast<bool>(d_ss); }
};

// the totally geodesic sphere { Im(z) = 0 }: (s,t) -> (cos s, sin s e^{it})
ParamSurface equator();

// the Clifford torus |z|^2 = |w|^2 = 1/2: (s,t) -> (e^{is}, e^{it})/sqrt(2)
ParamSurface clifford();

// Phi_c(s,t) = (cos(s) e^{ict}, sin(s) e^{it}); minimal in every Berger sphere
ParamSurface phi_c(double c);

// round geodesic sphere of radius r centered at (1,0); mean curvature cot(r)
// in the unit round sphere.  A deliberately non-minimal test surface.
ParamSurface round_geodesic_sphere(double r);

// sample a parametric patch into a TriMesh (rows of constant t).  Degenerate
// sides (constant rows/columns) collapse to a single vertex with a fan.
TriMesh mesh_from_patch(const ParamSurface& surf, int res_s, int res_t);

// ---------------------------------------------------------------------------
// sinh-Gordon reduction u'' + (e^{2u} - 4 lambda^2 e^{-2u}) = 0

// One orbit of the sinh-Gordon oscillator, integrated with a fixed-step
// symmetric 4th order (Yoshida) scheme from the upper turning point.
// The conserved first integral is
//
//   E = (u')^2 + e^{2u} + 4 lambda^2 e^{-2u},
//
// so that e^{2u} oscillates between b^2 and a^2 where a^2, b^2 are the roots
// of y^2 - E y + 4 lambda^2 (hence E = a^2 + b^2 and lambda^2 = a^2 b^2 / 4).
struct SinhGordonSolution {
  double lambda_hopf = 0.0;  // Hopf differential normalization, > 0
  double energy = 0.0;       // value of the first integral
  double a = 0.0, b = 0.0;   // orbit bounds: b^2 <= e^{2u} <= a^2
  double step = 0.0;
  std::vector<double> xs, us, ups;
  double period = 0.0;  // measured from the returns to the upper turning point

  double u_at(double x) const;    // cubic Hermite on the sample grid
  double up_at(double x) const;
  double upp_at(double x) const { return -(std::exp(2.0 * u_at(x)) -
      4.0 * lambda_hopf * lambda_hopf * std::exp(-2.0 * u_at(x))); }
  // worst first-integral residual over the stored samples
  double energy_drift() const;
};

// integrate over [0, x_span] with initial step hint; the step is halved until
// the step-halving error estimate is below tol * x_span.
// requires lambda > 0 and E >= 4 lambda (minimum of the potential).
SinhGordonSolution solve_sinh_gordon(double lambda_hopf, double E, double x_span,
                                     double step, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Psi_{a,b}: explicit integration of the minimal immersions produced by a
// sinh-Gordon orbit,
//
//   Psi_{a,b}(x,y) = ( sqrt(e^{2u}-b^2) e^{i(b F + a y)},
//                      sqrt(a^2-e^{2u}) e^{i(b y - a G)} ) / sqrt(a^2-b^2)
//
//   F(x) = int_0^x sqrt(P)/(e^{2u}-b^2),  G(x) = int_0^x sqrt(P)/(a^2-e^{2u}),
//   P = (a^2-e^{2u})(e^{2u}-b^2) - e^{2u} (u')^2   (constant = 4 lambda^2 - a^2 b^2)
//
// requires a > b >= 0, a^2 + b^2 = sol.energy and a^2 b^2 <= 4 lambda^2.
// a^2 b^2 = 4 lambda^2 gives P = 0 and the surface is congruent to Phi_{a/b};
// smaller products give genuinely new members with <grad nu, V> != 0.
ParamSurface psi_ab(double a, double b, const SinhGordonSolution& sol);

// ---------------------------------------------------------------------------
// conformal data and the compatibility equations of a minimal immersion in
// the round sphere (kappa = 4, tau = 1):
//
//   p_zbar = 0,   A_zbar = i e^{2u} nu / 2,
//   nu_z = i A - 2 e^{-2u} conj(A) p,   |A|^2 = e^{2u}(1 - nu^2)/4
//
// with A = <Phi_z, V>, p = <Phi_zz, N>, nu = <N, V>.

struct ConformalData {
  int nx = 0, ny = 0;
  double x0 = 0, dx = 0, y0 = 0, dy = 0;
  std::vector<double> u, nu;
  std::vector<Complex> A, p;
  std::vector<Complex> A_zbar, p_zbar, nu_z;  // local finite differences
  double max_offdiag = 0.0;  // conformality defect observed while sampling
};

// samples a grid strictly inside the parameter domain; throws
// std::domain_error if the parametrization is detectably non-conformal
ConformalData make_conformal_data(const ParamSurface& surf, int nx, int ny,
                                  double margin = 0.0);

struct CompatibilityResiduals {
  double p_holomorphic = 0.0;   // sup |p_zbar|
  double A_equation = 0.0;      // sup |A_zbar - i e^{2u} nu / 2|
  double nu_equation = 0.0;     // sup |nu_z - iA + 2 e^{-2u} conj(A) p|
  double norm_identity = 0.0;   // sup ||A|^2 - e^{2u}(1-nu^2)/4|
  double max() const;
};

CompatibilityResiduals compatibility_residuals(const ConformalData& data);

// ---------------------------------------------------------------------------
// Lawson tau_{m,n} = Phi_{m/n} topology by orientation transport

struct TauMnReport {
  int chi = 0;
  bool orientable = true;
  bool klein_by_parity = false;  // the m*n even rule, for comparison
};

// requires gcd(m,n) = 1; res controls the grid density
TauMnReport tau_mn_topology(int m, int n, int res = 12);

}  // namespace berger
