#include "berger/curvature.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace berger {

namespace {

struct SurfJet {
  Vec4 phi, ps, pt, pss, pst, ptt;
};

SurfJet surf_jet(const ParamSurface& surf, double s, double t) {
  SurfJet j;
  j.phi = surf.eval(s, t);
  const double h = 1e-4;
  if (surf.has_analytic_first()) {
    j.ps = surf.d_s(s, t);
    j.pt = surf.d_t(s, t);
  } else {
    j.ps = (surf.eval(s + h, t) - surf.eval(s - h, t)) / (2 * h);
    j.pt = (surf.eval(s, t + h) - surf.eval(s, t - h)) / (2 * h);
  }
  if (surf.has_analytic_second()) {
    j.pss = surf.d_ss(s, t);
    j.pst = surf.d_st(s, t);
    j.ptt = surf.d_tt(s, t);
  } else {
    // central differences with one Richardson extrapolation step
    auto second = [&](double hh) {
      SurfJet d;
      d.pss = (surf.eval(s + hh, t) - 2 * j.phi + surf.eval(s - hh, t)) / (hh * hh);
      d.ptt = (surf.eval(s, t + hh) - 2 * j.phi + surf.eval(s, t - hh)) / (hh * hh);
      d.pst = (surf.eval(s + hh, t + hh) - surf.eval(s + hh, t - hh) -
               surf.eval(s - hh, t + hh) + surf.eval(s - hh, t - hh)) /
              (4 * hh * hh);
      return d;
    };
    const SurfJet c = second(h), f = second(h / 2);
    j.pss = (4.0 * f.pss - c.pss) / 3.0;
    j.pst = (4.0 * f.pst - c.pst) / 3.0;
    j.ptt = (4.0 * f.ptt - c.ptt) / 3.0;
  }
  return j;
}

Vec4 normal_from_jet(const SurfJet& j) {
  const Vec4 raw = -cross4(j.phi, j.ps, j.pt);
  const double n = raw.norm();
  if (n < 1e-12 * j.ps.norm() * j.pt.norm() || n == 0.0)
    throw std::runtime_error("round_normal: degenerate immersion point");
  return raw / n;
}

double coeff(const BergerParams& params) {
  // (1 - kappa / 4 tau^2)
  return 1.0 - params.kappa / (4.0 * params.tau * params.tau);
}

Vec4 berger_normal_from(const BergerParams& params, const SurfJet& j,
                        const Vec4& N) {
  const double beta = coeff(params);
  const double nu = N.dot(hopf_field(j.phi));
  const double under = 1.0 - beta * nu * nu;
  if (under <= 0.0)
    throw std::runtime_error("berger_normal: nonpositive radicand");
  const double f = std::sqrt(params.kappa) / (2.0 * std::sqrt(under));
  return f * (N - nu * beta * hopf_field(j.phi));
}

// derivative of the unit round normal along the parameter directions
struct NormalJet {
  Vec4 N, Ns, Nt;
};

NormalJet normal_jet(const ParamSurface& surf, double s, double t) {
  NormalJet out;
  const SurfJet j = surf_jet(surf, s, t);
  out.N = normal_from_jet(j);
  if (surf.has_analytic_second()) {
    const Vec4 raw = -cross4(j.phi, j.ps, j.pt);
    const double n = raw.norm();
    const Vec4 raw_s = -(cross4(j.ps, j.ps, j.pt) + cross4(j.phi, j.pss, j.pt) +
                         cross4(j.phi, j.ps, j.pst));
    const Vec4 raw_t = -(cross4(j.pt, j.ps, j.pt) + cross4(j.phi, j.pst, j.pt) +
                         cross4(j.phi, j.ps, j.ptt));
    out.Ns = (raw_s - out.N.dot(raw_s) * out.N) / n;
    out.Nt = (raw_t - out.N.dot(raw_t) * out.N) / n;
  } else {
    const double h = 1e-4;
    auto N_at = [&](double ss, double tt) {
      Vec4 nn = normal_from_jet(surf_jet(surf, ss, tt));
      return nn.dot(out.N) < 0.0 ? Vec4(-nn) : nn;
    };
    out.Ns = (N_at(s + h, t) - N_at(s - h, t)) / (2 * h);
    out.Nt = (N_at(s, t + h) - N_at(s, t - h)) / (2 * h);
  }
  return out;
}

// Berger normal and its parameter derivatives
struct BergerNormalJet {
  Vec4 Nb, Nbs, Nbt;
};

BergerNormalJet berger_normal_jet(const BergerParams& params,
                                  const ParamSurface& surf, double s, double t) {
  const SurfJet j = surf_jet(surf, s, t);
  const NormalJet nj = normal_jet(surf, s, t);
  const double beta = coeff(params);
  const Vec4 V = hopf_field(j.phi);
  const double nu = nj.N.dot(V);
  const double under = 1.0 - beta * nu * nu;
  const double f = std::sqrt(params.kappa) / (2.0 * std::sqrt(under));

  BergerNormalJet out;
  out.Nb = f * (nj.N - nu * beta * V);
  auto d_dir = [&](const Vec4& dN, const Vec4& dPhi) {
    const Vec4 dV = jmul(dPhi);
    const double dnu = dN.dot(V) + nj.N.dot(dV);
    const double df = f * beta * nu * dnu / under;
    return Vec4(df * (nj.N - nu * beta * V) +
                f * (dN - dnu * beta * V - nu * beta * dV));
  };
  out.Nbs = d_dir(nj.Ns, j.ps);
  out.Nbt = d_dir(nj.Nt, j.pt);
  return out;
}

// Berger-orthonormal tangent frame with coordinates in the (ps, pt) basis
struct Frame {
  Vec4 e1, e2;
  double a1, a2, b2;  // e1 = a1 ps, e2 = a2 ps + b2 pt
};

Frame tangent_frame(const BergerParams& params, const SurfJet& j) {
  Frame fr;
  const double g11 = metric_at(params, j.phi, j.ps, j.ps);
  if (g11 <= 0.0) throw std::runtime_error("tangent_frame: degenerate metric");
  fr.a1 = 1.0 / std::sqrt(g11);
  fr.e1 = fr.a1 * j.ps;
  const double proj = metric_at(params, j.phi, j.pt, fr.e1);
  const Vec4 raw = j.pt - proj * fr.e1;
  const double n2 = metric_at(params, j.phi, raw, raw);
  if (n2 <= 0.0) throw std::runtime_error("tangent_frame: degenerate metric");
  fr.b2 = 1.0 / std::sqrt(n2);
  fr.a2 = -proj * fr.a1 * fr.b2;
  fr.e2 = fr.b2 * raw;
  return fr;
}

}  // namespace

TangentVector round_normal(const ParamSurface& surf, double s, double t) {
  const SurfJet j = surf_jet(surf, s, t);
  TangentVector out;
  out.base = SpherePoint::project(j.phi);
  out.vec = normal_from_jet(j);
  return out;
}

TangentVector berger_normal(const BergerParams& params, const ParamSurface& surf,
                            double s, double t) {
  const SurfJet j = surf_jet(surf, s, t);
  TangentVector out;
  out.base = SpherePoint::project(j.phi);
  out.vec = berger_normal_from(params, j, normal_from_jet(j));
  return out;
}

double mean_curvature_round(const ParamSurface& surf, double s, double t) {
  const SurfJet j = surf_jet(surf, s, t);
  const Vec4 N = normal_from_jet(j);
  const double E = j.ps.dot(j.ps), F = j.ps.dot(j.pt), G = j.pt.dot(j.pt);
  const double det = E * G - F * F;
  if (det <= 0.0)
    throw std::runtime_error("mean_curvature_round: degenerate first form");
  const double e = j.pss.dot(N), f = j.pst.dot(N), g = j.ptt.dot(N);
  return (G * e - 2.0 * F * f + E * g) / (2.0 * det);
}

double mean_curvature_berger_lemma(const BergerParams& params, double H, double nu,
                                   double grad_nu_dot_V) {
  const double beta = coeff(params);
  const double under = 1.0 - beta * nu * nu;
  return std::sqrt(params.kappa) / (2.0 * std::sqrt(under)) *
         (H + beta * grad_nu_dot_V / (2.0 * under));
}

double grad_nu_dot_v(const ParamSurface& surf, double s, double t) {
  const SurfJet j = surf_jet(surf, s, t);
  const Vec4 Nc = normal_from_jet(j);
  const double h = 1e-4;
  auto nu_at = [&](double ss, double tt) {
    const SurfJet jj = surf_jet(surf, ss, tt);
    Vec4 nn = normal_from_jet(jj);
    if (nn.dot(Nc) < 0.0) nn = -nn;
    return nn.dot(hopf_field(jj.phi));
  };
  const double nus = (nu_at(s + h, t) - nu_at(s - h, t)) / (2 * h);
  const double nut = (nu_at(s, t + h) - nu_at(s, t - h)) / (2 * h);
  // round surface gradient: grad nu = g^{ij} nu_i Phi_j
  const double E = j.ps.dot(j.ps), F = j.ps.dot(j.pt), G = j.pt.dot(j.pt);
  const double det = E * G - F * F;
  const double a = (G * nus - F * nut) / det;
  const double b = (-F * nus + E * nut) / det;
  const Vec4 V = hopf_field(j.phi);
  return a * j.ps.dot(V) + b * j.pt.dot(V);
}

double mean_curvature_berger_direct(const BergerParams& params,
                                    const ParamSurface& surf, double s, double t) {
  const SurfJet j = surf_jet(surf, s, t);
  const Frame fr = tangent_frame(params, j);
  const BergerNormalJet bn = berger_normal_jet(params, surf, s, t);
  // directional derivatives of N^b along the frame, then the connection
  auto cov = [&](double ca, double cb, const Vec4& dir) -> Vec4 {
    const Vec4 flat = ca * bn.Nbs + cb * bn.Nbt;
    return tangential(j.phi, flat) + berger_correction(params, j.phi, dir, bn.Nb);
  };
  const Vec4 c1 = cov(fr.a1, 0.0, fr.e1);
  const Vec4 c2 = cov(fr.a2, fr.b2, fr.e2);
  return -0.5 * (metric_at(params, j.phi, c1, fr.e1) +
                 metric_at(params, j.phi, c2, fr.e2));
}

Mat2 shape_operator(const BergerParams& params, const ParamSurface& surf, double s,
                    double t) {
  const SurfJet j = surf_jet(surf, s, t);
  const Frame fr = tangent_frame(params, j);
  const BergerNormalJet bn = berger_normal_jet(params, surf, s, t);
  auto cov = [&](double ca, double cb, const Vec4& dir) -> Vec4 {
    const Vec4 flat = ca * bn.Nbs + cb * bn.Nbt;
    return tangential(j.phi, flat) + berger_correction(params, j.phi, dir, bn.Nb);
  };
  const Vec4 c1 = cov(fr.a1, 0.0, fr.e1);
  const Vec4 c2 = cov(fr.a2, fr.b2, fr.e2);
  Mat2 S;
  S(0, 0) = -metric_at(params, j.phi, c1, fr.e1);
  S(0, 1) = -metric_at(params, j.phi, c1, fr.e2);
  S(1, 0) = -metric_at(params, j.phi, c2, fr.e1);
  S(1, 1) = -metric_at(params, j.phi, c2, fr.e2);
  return S;
}

CurvatureSample curvature_sample(const BergerParams& params,
                                 const ParamSurface& surf, double s, double t) {
  CurvatureSample out;
  out.s = s;
  out.t = t;
  const SurfJet j = surf_jet(surf, s, t);
  out.N = normal_from_jet(j);
  out.N_b = berger_normal_from(params, j, out.N);
  out.nu = out.N.dot(hopf_field(j.phi));
  out.H = mean_curvature_round(surf, s, t);
  out.grad_nu_dot_V = grad_nu_dot_v(surf, s, t);
  out.H_b_lemma =
      mean_curvature_berger_lemma(params, out.H, out.nu, out.grad_nu_dot_V);
  out.H_b = mean_curvature_berger_direct(params, surf, s, t);
  out.S = shape_operator(params, surf, s, t);
  return out;
}

}  // namespace berger
