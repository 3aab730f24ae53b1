#include "berger/families.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace berger {

namespace {

Vec4 zw(Complex z1, Complex z2) { return from_zw(z1, z2); }
const Complex I(0.0, 1.0);

}  // namespace

ParamSurface equator() {
  ParamSurface s = phi_c(0.0);
  s.s_min = 0.0;
  s.s_max = M_PI;
  s.t_min = 0.0;
  s.t_max = 2.0 * M_PI;
  s.periodic_t = true;
  return s;
}

ParamSurface clifford() {
  ParamSurface surf;
  const double r = 1.0 / std::sqrt(2.0);
  surf.eval = [r](double s, double t) {
    return zw(std::polar(r, s), std::polar(r, t));
  };
  surf.d_s = [r](double s, double) { return zw(I * std::polar(r, s), 0.0); };
  surf.d_t = [r](double, double t) { return zw(0.0, I * std::polar(r, t)); };
  surf.d_ss = [r](double s, double) { return zw(-std::polar(r, s), 0.0); };
  surf.d_st = [](double, double) { return Vec4::Zero().eval(); };
  surf.d_tt = [r](double, double t) { return zw(0.0, -std::polar(r, t)); };
  surf.s_min = 0.0;
  surf.s_max = 2.0 * M_PI;
  surf.t_min = 0.0;
  surf.t_max = 2.0 * M_PI;
  surf.periodic_s = surf.periodic_t = true;
  return surf;
}

ParamSurface phi_c(double c) {
  ParamSurface surf;
  surf.eval = [c](double s, double t) {
    return zw(std::cos(s) * std::polar(1.0, c * t), std::sin(s) * std::polar(1.0, t));
  };
  surf.d_s = [c](double s, double t) {
    return zw(-std::sin(s) * std::polar(1.0, c * t),
              std::cos(s) * std::polar(1.0, t));
  };
  surf.d_t = [c](double s, double t) {
    return zw(I * c * std::cos(s) * std::polar(1.0, c * t),
              I * std::sin(s) * std::polar(1.0, t));
  };
  surf.d_ss = [c](double s, double t) {
    return zw(-std::cos(s) * std::polar(1.0, c * t),
              -std::sin(s) * std::polar(1.0, t));
  };
  surf.d_st = [c](double s, double t) {
    return zw(-I * c * std::sin(s) * std::polar(1.0, c * t),
              I * std::cos(s) * std::polar(1.0, t));
  };
  surf.d_tt = [c](double s, double t) {
    return zw(-c * c * std::cos(s) * std::polar(1.0, c * t),
              -std::sin(s) * std::polar(1.0, t));
  };
  surf.s_min = 0.0;
  surf.s_max = M_PI;
  surf.t_min = 0.0;
  surf.t_max = 2.0 * M_PI;
  surf.periodic_t = true;
  return surf;
}

ParamSurface round_geodesic_sphere(double r) {
  if (!(r > 0.0 && r < M_PI / 2))
    throw std::invalid_argument("round_geodesic_sphere: need 0 < r < pi/2");
  ParamSurface surf;
  const double cr = std::cos(r), sr = std::sin(r);
  surf.eval = [cr, sr](double s, double t) {
    return zw(Complex(cr, sr * std::cos(s)), sr * std::sin(s) * std::polar(1.0, t));
  };
  surf.d_s = [sr](double s, double t) {
    return zw(Complex(0.0, -sr * std::sin(s)), sr * std::cos(s) * std::polar(1.0, t));
  };
  surf.d_t = [sr](double s, double t) {
    return zw(0.0, I * sr * std::sin(s) * std::polar(1.0, t));
  };
  surf.d_ss = [sr](double s, double t) {
    return zw(Complex(0.0, -sr * std::cos(s)),
              -sr * std::sin(s) * std::polar(1.0, t));
  };
  surf.d_st = [sr](double s, double t) {
    return zw(0.0, I * sr * std::cos(s) * std::polar(1.0, t));
  };
  surf.d_tt = [sr](double s, double t) {
    return zw(0.0, -sr * std::sin(s) * std::polar(1.0, t));
  };
  surf.s_min = 0.0;
  surf.s_max = M_PI;
  surf.t_min = 0.0;
  surf.t_max = 2.0 * M_PI;
  surf.periodic_t = true;
  return surf;
}

TriMesh mesh_from_patch(const ParamSurface& surf, int res_s, int res_t) {
  if (res_s < 1 || res_t < 1)
    throw std::invalid_argument("mesh_from_patch: resolution must be >= 1");
  const int ns = res_s + 1, nt = res_t + 1;
  const double ds = (surf.s_max - surf.s_min) / res_s;
  const double dt = (surf.t_max - surf.t_min) / res_t;

  TriMesh mesh;
  std::vector<int> id(ns * nt, -1);
  std::map<std::array<long long, 4>, int> dedup;
  auto key_of = [](const Vec4& p) {
    std::array<long long, 4> k;
    for (int i = 0; i < 4; ++i) k[i] = llround(p[i] * 1e10);
    return k;
  };
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double s = surf.s_min + i * ds, t = surf.t_min + j * dt;
      const Vec4 p = surf.eval(s, t).normalized();
      auto [it, fresh] = dedup.try_emplace(key_of(p), -1);
      if (fresh || it->second < 0) {
        it->second = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(p);
        BoundaryConstraint bc;
        const bool on_s = !surf.periodic_s && (i == 0 || i == res_s);
        const bool on_t = !surf.periodic_t && (j == 0 || j == res_t);
        if (on_s || on_t) {
          bc.edge = on_s ? (i == 0 ? 0 : 1) : (j == 0 ? 2 : 3);
          bc.param = on_s ? t : s;
        }
        mesh.boundary.push_back(bc);
      }
      id[i * nt + j] = it->second;
    }
  }
  for (int i = 0; i < res_s; ++i) {
    for (int j = 0; j < res_t; ++j) {
      const int v00 = id[i * nt + j], v10 = id[(i + 1) * nt + j];
      const int v01 = id[i * nt + j + 1], v11 = id[(i + 1) * nt + j + 1];
      auto push = [&mesh](int a, int b, int c) {
        if (a != b && b != c && a != c) mesh.faces.push_back({a, b, c});
      };
      push(v00, v10, v11);
      push(v00, v11, v01);
    }
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// sinh-Gordon

namespace {

double sg_accel(double u, double lam2) {
  return -(std::exp(2.0 * u) - 4.0 * lam2 * std::exp(-2.0 * u));
}

// one symmetric 4th order (Yoshida) step of u'' = accel(u)
void yoshida4(double& u, double& v, double h, double lam2) {
  static const double cbrt2 = std::cbrt(2.0);
  static const double w1 = 1.0 / (2.0 - cbrt2);
  static const double w0 = -cbrt2 / (2.0 - cbrt2);
  for (double w : {w1, w0, w1}) {
    const double hh = w * h;
    v += 0.5 * hh * sg_accel(u, lam2);
    u += hh * v;
    v += 0.5 * hh * sg_accel(u, lam2);
  }
}

struct Orbit {
  std::vector<double> us, ups;
};

Orbit integrate(double u0, double h, int n, double lam2) {
  Orbit orbit;
  orbit.us.resize(n + 1);
  orbit.ups.resize(n + 1);
  double u = u0, v = 0.0;
  orbit.us[0] = u;
  orbit.ups[0] = v;
  for (int i = 1; i <= n; ++i) {
    yoshida4(u, v, h, lam2);
    orbit.us[i] = u;
    orbit.ups[i] = v;
  }
  return orbit;
}

double hermite(double t, double f0, double f1, double d0, double d1, double h) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

}  // namespace

double SinhGordonSolution::u_at(double x) const {
  const int n = static_cast<int>(xs.size());
  if (n == 0) throw std::runtime_error("SinhGordonSolution: empty");
  if (x <= xs.front()) return us.front();
  if (x >= xs.back()) return us.back();
  const int i = std::min(static_cast<int>((x - xs.front()) / step), n - 2);
  const double t = (x - xs[i]) / step;
  return hermite(t, us[i], us[i + 1], ups[i], ups[i + 1], step);
}

double SinhGordonSolution::up_at(double x) const {
  const int n = static_cast<int>(xs.size());
  if (n == 0) throw std::runtime_error("SinhGordonSolution: empty");
  if (x <= xs.front()) return ups.front();
  if (x >= xs.back()) return ups.back();
  const int i = std::min(static_cast<int>((x - xs.front()) / step), n - 2);
  const double t = (x - xs[i]) / step;
  const double lam2 = lambda_hopf * lambda_hopf;
  return hermite(t, ups[i], ups[i + 1], sg_accel(us[i], lam2),
                 sg_accel(us[i + 1], lam2), step);
}

double SinhGordonSolution::energy_drift() const {
  const double lam2 = lambda_hopf * lambda_hopf;
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double y = std::exp(2.0 * us[i]);
    const double e = ups[i] * ups[i] + y + 4.0 * lam2 / y;
    worst = std::max(worst, std::abs(e - energy));
  }
  return worst;
}

SinhGordonSolution solve_sinh_gordon(double lambda_hopf, double E, double x_span,
                                     double step, double tol) {
  if (!(lambda_hopf > 0.0))
    throw std::domain_error("solve_sinh_gordon: lambda must be > 0");
  if (!(x_span > 0.0) || !(step > 0.0))
    throw std::invalid_argument("solve_sinh_gordon: bad span/step");
  const double lam2 = lambda_hopf * lambda_hopf;
  const double emin = 4.0 * lambda_hopf;  // potential minimum, at e^{2u} = 2 lambda
  if (E < emin * (1.0 - 1e-12))
    throw std::domain_error("solve_sinh_gordon: E below the potential minimum");

  SinhGordonSolution sol;
  sol.lambda_hopf = lambda_hopf;
  sol.energy = E;
  const double disc = std::max(E * E - 16.0 * lam2, 0.0);
  const double yhi = 0.5 * (E + std::sqrt(disc));
  const double ylo = 0.5 * (E - std::sqrt(disc));
  sol.a = std::sqrt(yhi);
  sol.b = std::sqrt(ylo);

  if (disc < 1e-14 * E * E) {
    // equilibrium orbit u = const
    const double u0 = 0.5 * std::log(2.0 * lambda_hopf);
    const int n = std::max(2, static_cast<int>(std::ceil(x_span / step)));
    sol.step = x_span / n;
    sol.xs.resize(n + 1);
    sol.us.assign(n + 1, u0);
    sol.ups.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) sol.xs[i] = i * sol.step;
    sol.period = 2.0 * M_PI / std::sqrt(8.0 * lambda_hopf);
    return sol;
  }

  const double u0 = 0.5 * std::log(yhi);
  double h = step;
  Orbit fine;
  for (int attempt = 0;; ++attempt) {
    const int n = std::max(2, static_cast<int>(std::ceil(x_span / h)));
    h = x_span / n;
    const Orbit coarse = integrate(u0, h, n, lam2);
    fine = integrate(u0, h / 2.0, 2 * n, lam2);
    double err = 0.0;
    for (int i = 0; i <= n; ++i)
      err = std::max(err, std::abs(coarse.us[i] - fine.us[2 * i]));
    if (err <= tol * x_span) {
      sol.step = h / 2.0;
      break;
    }
    if (attempt >= 16)
      throw std::runtime_error("solve_sinh_gordon: step control did not converge");
    h /= 2.0;
  }
  const int nn = static_cast<int>(fine.us.size()) - 1;
  sol.xs.resize(nn + 1);
  for (int i = 0; i <= nn; ++i) sol.xs[i] = i * sol.step;
  sol.us = std::move(fine.us);
  sol.ups = std::move(fine.ups);

  // period: first return to the upper turning point (u' crosses + -> -)
  sol.period = 0.0;
  for (int i = 1; i + 1 < static_cast<int>(sol.ups.size()); ++i) {
    if (sol.ups[i] > 0.0 && sol.ups[i + 1] <= 0.0) {
      const double frac = sol.ups[i] / (sol.ups[i] - sol.ups[i + 1]);
      sol.period = sol.xs[i] + frac * sol.step;
      break;
    }
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Psi_{a,b}

namespace {

struct PsiData {
  double a, b, c2;  // c2 = a^2 - b^2
  double Pconst;
  SinhGordonSolution sol;
  std::vector<double> F, G;  // cumulative integrals on sol.xs
  bool degenerate;           // P = 0 orbit (a,b at the turning points)

  double interp(const std::vector<double>& vals,
                const std::vector<double>& ders, double x) const {
    const int n = static_cast<int>(sol.xs.size());
    if (x <= sol.xs.front()) return vals.front();
    if (x >= sol.xs.back()) return vals.back();
    const int i = std::min(static_cast<int>(x / sol.step), n - 2);
    const double t = (x - sol.xs[i]) / sol.step;
    return hermite(t, vals[i], vals[i + 1], ders[i], ders[i + 1], sol.step);
  }
};

// cumulative composite Simpson on a uniform grid (local quadratic panels)
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<double> F(n, 0.0);
  if (n < 3) {
    for (int i = 1; i < n; ++i) F[i] = F[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return F;
  }
  for (int i = 1; i < n; ++i) {
    double inc;
    if (i + 1 < n)
      inc = h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
    else
      inc = h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    F[i] = F[i - 1] + inc;
  }
  return F;
}

}  // namespace

ParamSurface psi_ab(double a, double b, const SinhGordonSolution& sol) {
  if (!(a > b && b >= 0.0))
    throw std::invalid_argument("psi_ab: need a > b >= 0");
  const double a2 = a * a, b2 = b * b;
  const double lam2 = sol.lambda_hopf * sol.lambda_hopf;
  if (std::abs(a2 + b2 - sol.energy) > 1e-8 * std::max(1.0, sol.energy))
    throw std::invalid_argument("psi_ab: a^2 + b^2 must equal the orbit energy");
  if (a2 * b2 > 4.0 * lam2 + 1e-9)
    throw std::invalid_argument("psi_ab: requires a^2 b^2 <= 4 lambda^2");

  auto data = std::make_shared<PsiData>();
  data->a = a;
  data->b = b;
  data->c2 = a2 - b2;
  data->Pconst = std::max(4.0 * lam2 - a2 * b2, 0.0);
  data->sol = sol;
  data->degenerate = data->Pconst < 1e-12;

  const int n = static_cast<int>(sol.xs.size());
  std::vector<double> fint(n, 0.0), gint(n, 0.0);
  if (!data->degenerate) {
    for (int i = 0; i < n; ++i) {
      const double y = std::exp(2.0 * sol.us[i]);
      const double P = (a2 - y) * (y - b2) - y * sol.ups[i] * sol.ups[i];
      if (P < -1e-8)
        throw std::runtime_error("psi_ab: inconsistent solution, P < -1e-8");
      const double sq = std::sqrt(std::max(P, 0.0));
      fint[i] = sq / std::max(y - b2, 1e-14);
      gint[i] = sq / std::max(a2 - y, 1e-14);
    }
  }
  data->F = cumulative_simpson(fint, sol.step);
  data->G = cumulative_simpson(gint, sol.step);
  // keep the integrands for Hermite interpolation of F, G
  auto fder = std::make_shared<std::vector<double>>(std::move(fint));
  auto gder = std::make_shared<std::vector<double>>(std::move(gint));

  struct Locals {
    double R, Q, Rp, Qp, Rpp, Qpp, alpha, beta, ax, bx, axx, bxx, A, B;
  };
  auto locals = [data, fder, gder](double x, double y) {
    Locals L;
    const double a = data->a, b = data->b, c2 = data->c2;
    const double u = data->sol.u_at(x);
    const double up = data->sol.up_at(x);
    const double upp = data->sol.upp_at(x);
    const double yu = std::exp(2.0 * u);
    const double yup = 2.0 * up * yu;
    L.R = std::sqrt(std::max(yu - b * b, 0.0) / c2);
    L.Q = std::sqrt(std::max(a * a - yu, 0.0) / c2);
    const double Rsafe = std::max(L.R, 1e-12), Qsafe = std::max(L.Q, 1e-12);
    L.Rp = up * yu / (c2 * Rsafe);
    L.Qp = -up * yu / (c2 * Qsafe);
    L.Rpp = (upp * yu + 2.0 * up * up * yu) / (c2 * Rsafe) -
            (up * yu) * (up * yu) / (c2 * c2 * Rsafe * Rsafe * Rsafe);
    L.Qpp = -(upp * yu + 2.0 * up * up * yu) / (c2 * Qsafe) -
            (up * yu) * (up * yu) / (c2 * c2 * Qsafe * Qsafe * Qsafe);
    double Fx = 0.0, Gx = 0.0, Fpx = 0.0, Gpx = 0.0, Fppx = 0.0, Gppx = 0.0;
    if (!data->degenerate) {
      Fx = data->interp(data->F, *fder, x);
      Gx = data->interp(data->G, *gder, x);
      const double sq = std::sqrt(data->Pconst);
      Fpx = sq / (yu - b * b);
      Gpx = sq / (a * a - yu);
      Fppx = -sq * yup / ((yu - b * b) * (yu - b * b));
      Gppx = sq * yup / ((a * a - yu) * (a * a - yu));
    }
    L.alpha = b * Fx + a * y;
    L.beta = b * y - a * Gx;
    L.ax = b * Fpx;
    L.bx = -a * Gpx;
    L.axx = b * Fppx;
    L.bxx = -a * Gppx;
    L.A = a;
    L.B = b;
    return L;
  };

  ParamSurface surf;
  surf.eval = [locals](double x, double y) {
    const Locals L = locals(x, y);
    return zw(std::polar(L.R, L.alpha), std::polar(L.Q, L.beta));
  };
  surf.d_s = [locals](double x, double y) {
    const Locals L = locals(x, y);
    const Complex e1 = std::polar(1.0, L.alpha), e2 = std::polar(1.0, L.beta);
    return zw((L.Rp + I * L.R * L.ax) * e1, (L.Qp + I * L.Q * L.bx) * e2);
  };
  surf.d_t = [locals](double x, double y) {
    const Locals L = locals(x, y);
    return zw(I * L.A * std::polar(L.R, L.alpha), I * L.B * std::polar(L.Q, L.beta));
  };
  surf.d_ss = [locals](double x, double y) {
    const Locals L = locals(x, y);
    const Complex e1 = std::polar(1.0, L.alpha), e2 = std::polar(1.0, L.beta);
    const Complex z1 =
        (L.Rpp + 2.0 * I * L.Rp * L.ax + I * L.R * L.axx - L.R * L.ax * L.ax) * e1;
    const Complex z2 =
        (L.Qpp + 2.0 * I * L.Qp * L.bx + I * L.Q * L.bxx - L.Q * L.bx * L.bx) * e2;
    return zw(z1, z2);
  };
  surf.d_st = [locals](double x, double y) {
    const Locals L = locals(x, y);
    const Complex e1 = std::polar(1.0, L.alpha), e2 = std::polar(1.0, L.beta);
    return zw(I * L.A * (L.Rp + I * L.R * L.ax) * e1,
              I * L.B * (L.Qp + I * L.Q * L.bx) * e2);
  };
  surf.d_tt = [locals](double x, double y) {
    const Locals L = locals(x, y);
    return zw(-L.A * L.A * std::polar(L.R, L.alpha),
              -L.B * L.B * std::polar(L.Q, L.beta));
  };
  surf.s_min = sol.xs.front();
  surf.s_max = sol.xs.back();
  surf.t_min = 0.0;
  surf.t_max = 2.0 * M_PI;
  surf.periodic_t = true;
  return surf;
}

// ---------------------------------------------------------------------------
// conformal data / compatibility equations

namespace {

struct Jet {
  Vec4 phi, phi_x, phi_y, phi_xx, phi_xy, phi_yy;
};

Jet jet_at(const ParamSurface& surf, double x, double y) {
  Jet j;
  j.phi = surf.eval(x, y);
  const double h = 1e-4;
  if (surf.has_analytic_first()) {
    j.phi_x = surf.d_s(x, y);
    j.phi_y = surf.d_t(x, y);
  } else {
    j.phi_x = (surf.eval(x + h, y) - surf.eval(x - h, y)) / (2 * h);
    j.phi_y = (surf.eval(x, y + h) - surf.eval(x, y - h)) / (2 * h);
  }
  if (surf.has_analytic_second()) {
    j.phi_xx = surf.d_ss(x, y);
    j.phi_xy = surf.d_st(x, y);
    j.phi_yy = surf.d_tt(x, y);
  } else {
    j.phi_xx = (surf.eval(x + h, y) - 2.0 * j.phi + surf.eval(x - h, y)) / (h * h);
    j.phi_yy = (surf.eval(x, y + h) - 2.0 * j.phi + surf.eval(x, y - h)) / (h * h);
    j.phi_xy = (surf.eval(x + h, y + h) - surf.eval(x + h, y - h) -
                surf.eval(x - h, y + h) + surf.eval(x - h, y - h)) /
               (4 * h * h);
  }
  return j;
}

struct PointData {
  double u, nu;
  Complex A, p;
  double offdiag;
};

PointData conformal_point(const ParamSurface& surf, double x, double y,
                          const Vec4* orient) {
  const Jet j = jet_at(surf, x, y);
  PointData out;
  const double ex2 = j.phi_x.squaredNorm();
  const double ey2 = j.phi_y.squaredNorm();
  out.offdiag = std::max(std::abs(j.phi_x.dot(j.phi_y)), std::abs(ex2 - ey2)) /
                std::max(ex2, 1e-300);
  out.u = 0.5 * std::log(0.5 * (ex2 + ey2));
  // orientation fixed so the compatibility equations close:
  // det[Phi, Phi_x, Phi_y, N] < 0
  Vec4 N = -cross4(j.phi, j.phi_x, j.phi_y);
  const double nn = N.norm();
  if (nn < 1e-14) throw std::runtime_error("conformal_point: degenerate frame");
  N /= nn;
  if (orient && N.dot(*orient) < 0.0) N = -N;
  const Vec4 V = hopf_field(j.phi);
  out.nu = N.dot(V);
  out.A = 0.5 * Complex(j.phi_x.dot(V), -j.phi_y.dot(V));
  out.p = 0.25 * Complex(j.phi_xx.dot(N) - j.phi_yy.dot(N), -2.0 * j.phi_xy.dot(N));
  return out;
}

}  // namespace

ConformalData make_conformal_data(const ParamSurface& surf, int nx, int ny,
                                  double margin) {
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("make_conformal_data: grid too small");
  ConformalData data;
  data.nx = nx;
  data.ny = ny;
  const double h = 1e-4;
  data.x0 = surf.s_min + margin + 2 * h;
  data.y0 = surf.t_min + margin + 2 * h;
  data.dx = (surf.s_max - surf.s_min - 2 * (margin + 2 * h)) / (nx - 1);
  data.dy = (surf.t_max - surf.t_min - 2 * (margin + 2 * h)) / (ny - 1);
  const int n = nx * ny;
  data.u.resize(n);
  data.nu.resize(n);
  data.A.resize(n);
  data.p.resize(n);
  data.A_zbar.resize(n);
  data.p_zbar.resize(n);
  data.nu_z.resize(n);

  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const double x = data.x0 + ix * data.dx, y = data.y0 + iy * data.dy;
      const Jet jc = jet_at(surf, x, y);
      const Vec4 Nc = (-cross4(jc.phi, jc.phi_x, jc.phi_y)).normalized();
      const PointData c = conformal_point(surf, x, y, &Nc);
      if (c.offdiag > 1e-6)
        throw std::domain_error("make_conformal_data: parametrization not conformal");
      const PointData xp = conformal_point(surf, x + h, y, &Nc);
      const PointData xm = conformal_point(surf, x - h, y, &Nc);
      const PointData yp = conformal_point(surf, x, y + h, &Nc);
      const PointData ym = conformal_point(surf, x, y - h, &Nc);

      const int k = ix * ny + iy;
      data.u[k] = c.u;
      data.nu[k] = c.nu;
      data.A[k] = c.A;
      data.p[k] = c.p;
      const Complex Ax = (xp.A - xm.A) / (2 * h), Ay = (yp.A - ym.A) / (2 * h);
      const Complex px = (xp.p - xm.p) / (2 * h), py = (yp.p - ym.p) / (2 * h);
      const double nx_ = (xp.nu - xm.nu) / (2 * h), ny_ = (yp.nu - ym.nu) / (2 * h);
      data.A_zbar[k] = 0.5 * (Ax + I * Ay);
      data.p_zbar[k] = 0.5 * (px + I * py);
      data.nu_z[k] = 0.5 * Complex(nx_, -ny_);
      data.max_offdiag = std::max(data.max_offdiag, c.offdiag);
    }
  }
  return data;
}

double CompatibilityResiduals::max() const {
  return std::max(std::max(p_holomorphic, A_equation),
                  std::max(nu_equation, norm_identity));
}

CompatibilityResiduals compatibility_residuals(const ConformalData& data) {
  CompatibilityResiduals res;
  const int n = data.nx * data.ny;
  for (int k = 0; k < n; ++k) {
    const double e2u = std::exp(2.0 * data.u[k]);
    res.p_holomorphic = std::max(res.p_holomorphic, std::abs(data.p_zbar[k]));
    res.A_equation = std::max(
        res.A_equation, std::abs(data.A_zbar[k] - I * e2u * data.nu[k] / 2.0));
    res.nu_equation =
        std::max(res.nu_equation,
                 std::abs(data.nu_z[k] - (I * data.A[k] -
                                          2.0 / e2u * std::conj(data.A[k]) *
                                              data.p[k])));
    res.norm_identity = std::max(
        res.norm_identity, std::abs(std::norm(data.A[k]) -
                                    e2u * (1.0 - data.nu[k] * data.nu[k]) / 4.0));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Lawson tau_{m,n} topology by orientation transport

namespace {

long long mod_inverse(long long a, long long n) {
  long long t = 0, newt = 1, r = n, newr = ((a % n) + n) % n;
  while (newr != 0) {
    const long long q = r / newr;
    std::swap(t, newt);
    newt -= q * t;
    std::swap(r, newr);
    newr -= q * r;
  }
  if (r != 1) throw std::invalid_argument("mod_inverse: not coprime");
  return ((t % n) + n) % n;
}

}  // namespace

TauMnReport tau_mn_topology(int m, int n, int res) {
  if (m < 1 || n < 1 || std::gcd(m, n) != 1)
    throw std::invalid_argument("tau_mn_topology: m, n must be coprime naturals");
  const int Ns = 2 * std::max(res, 4);
  const int Nt = 2 * n * std::max(res, 4);
  const double c = static_cast<double>(m) / n;
  const ParamSurface surf = phi_c(c);

  // vertex layout: grid points (i,j), then quad centers (i,j)
  auto gid = [&](int i, int j) {
    return ((i % Ns + Ns) % Ns) * Nt + ((j % Nt + Nt) % Nt);
  };
  auto cid = [&](int i, int j) {
    return Ns * Nt + ((i % Ns + Ns) % Ns) * Nt + ((j % Nt + Nt) % Nt);
  };
  TriMesh torus;
  torus.vertices.resize(2 * Ns * Nt);
  const double ds = 2.0 * M_PI / Ns, dt = 2.0 * M_PI * n / Nt;
  for (int i = 0; i < Ns; ++i)
    for (int j = 0; j < Nt; ++j) {
      torus.vertices[gid(i, j)] = surf.eval(i * ds, j * dt).normalized();
      torus.vertices[cid(i, j)] =
          surf.eval((i + 0.5) * ds, (j + 0.5) * dt).normalized();
    }
  for (int i = 0; i < Ns; ++i)
    for (int j = 0; j < Nt; ++j) {
      const int v00 = gid(i, j), v10 = gid(i + 1, j);
      const int v01 = gid(i, j + 1), v11 = gid(i + 1, j + 1);
      const int vc = cid(i, j);
      torus.faces.push_back({v00, v10, vc});
      torus.faces.push_back({v10, v11, vc});
      torus.faces.push_back({v11, v01, vc});
      torus.faces.push_back({v01, v00, vc});
    }

  // the parametrizing torus double covers the image; the deck involution
  // depends on the parity of m and n
  std::vector<int> image(2 * Ns * Nt);
  auto set_maps = [&](auto grid_map, auto quad_map) {
    for (int i = 0; i < Ns; ++i)
      for (int j = 0; j < Nt; ++j) {
        auto [gi, gj] = grid_map(i, j);
        image[gid(i, j)] = gid(gi, gj);
        auto [qi, qj] = quad_map(i, j);
        image[cid(i, j)] = cid(qi, qj);
      }
  };
  if ((m % 2 == 1) && (n % 2 == 1)) {
    // Phi(s + pi, t + n pi) = Phi(s, t): orientation preserving shift
    set_maps(
        [&](int i, int j) { return std::pair(i + Ns / 2, j + Nt / 2); },
        [&](int i, int j) { return std::pair(i + Ns / 2, j + Nt / 2); });
  } else if (n % 2 == 0) {
    // Phi(pi - s, t + 2 pi k0) = Phi(s, t), 2 k0 m = n (mod 2n)
    const long long k0 = ((n / 2) % n) * mod_inverse(m, n) % n;
    const int jshift = static_cast<int>(k0) * (Nt / n);
    set_maps(
        [&](int i, int j) { return std::pair(Ns / 2 - i, j + jshift); },
        [&](int i, int j) { return std::pair(Ns / 2 - i - 1, j + jshift); });
  } else {
    // m even: Phi(-s, t + n pi) = Phi(s, t)
    set_maps(
        [&](int i, int j) { return std::pair(-i, j + Nt / 2); },
        [&](int i, int j) { return std::pair(-i - 1, j + Nt / 2); });
  }

  // sanity: the involution must identify coincident image points
  for (int k = 0; k < 2 * Ns * Nt; k += 7)
    if ((torus.vertices[k] - torus.vertices[image[k]]).norm() > 1e-9)
      throw std::runtime_error("tau_mn_topology: deck involution mismatch");

  const TriMesh quotient = quotient_by_involution(torus, image);
  TauMnReport report;
  report.chi = euler_characteristic(quotient);
  report.orientable = is_orientable(quotient);
  report.klein_by_parity = (m * n) % 2 == 0;
  return report;
}

}  // namespace berger
