#include "cppm/constitutive.hpp"

#include <algorithm>
#include <cmath>

namespace cppm {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;

Stress transpose(const Stress& a) { return {a.s.transposed(), a.zz}; }

double decay_factor(double dt, double tau) { return tau > 0.0 && std::isfinite(tau) ? std::exp(-dt / tau) : 1.0; }
}  // namespace

ElasticModuli ElasticModuli::from(double E, double nu, double mu_c, double l) {
  if (!(E > 0.0)) throw ConfigError("material.E", "must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw ConfigError("material.nu", "must lie in (-1, 0.5)");
  if (!(mu_c >= 0.0)) throw ConfigError("material.mu_c", "must be non-negative");
  if (!(l > 0.0)) throw ConfigError("material.cosserat_length", "must be positive");
  ElasticModuli m;
  m.E = E;
  m.nu = nu;
  m.mu = E / (2.0 * (1.0 + nu));
  m.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  m.mu_c = mu_c;
  m.l = l;
  m.alpha_m = 2.0 * m.mu * l * l;
  return m;
}

ElasticModuli ElasticModuli::from_ratio(double E, double nu, double mu_c_over_mu, double l) {
  if (!(nu > -1.0 && nu < 0.5)) throw ConfigError("material.nu", "must lie in (-1, 0.5)");
  return from(E, nu, mu_c_over_mu * E / (2.0 * (1.0 + nu)), l);
}

void ViscoplasticParams::validate() const {
  if (!(c0 > 0.0)) throw ConfigError("material.viscoplastic.cohesion", "must be positive");
  if (!(eta > 0.0)) throw ConfigError("material.viscoplastic.viscosity", "must be positive");
  if (!(phi_f >= 0.0 && phi_f < M_PI / 2)) throw ConfigError("material.viscoplastic.friction_angle_deg", "out of range");
  if (!(psi >= 0.0 && psi < M_PI / 2)) throw ConfigError("material.viscoplastic.dilation_angle_deg", "out of range");
  if (!(a1 >= std::abs(a2) && a3 >= 0.0)) throw ConfigError("material.viscoplastic.a1", "need a1 >= |a2| and a3 >= 0");
  if (!(c_floor_ratio > 0.0)) throw ConfigError("material.viscoplastic.cohesion_floor_ratio", "must be positive");
  if (!(substep_limit > 0.0)) throw ConfigError("material.viscoplastic.substep_limit", "must be positive");
}

Stress elastic_stress(const Mat2& e, double ezz, const ElasticModuli& mod) {
  const double tr = e.xx + e.yy + ezz;
  Stress out;
  out.s = (mod.mu + mod.mu_c) * e + (mod.mu - mod.mu_c) * e.transposed();
  out.s.xx += mod.lambda * tr;
  out.s.yy += mod.lambda * tr;
  out.zz = mod.lambda * tr + 2.0 * mod.mu * ezz;
  return out;
}

double dp_coefficient(double angle) {
  const double s = std::sin(angle);
  return 2.0 * s / (kSqrt3 * (3.0 - s));
}

double cohesion(double eps_hat, const ViscoplasticParams& vp) {
  return std::max(vp.c0 + vp.h * eps_hat, vp.c_floor_ratio * vp.c0);
}

namespace {
struct Invariants {
  Stress dev;
  double p;
  double q;
};

Invariants invariants(const Stress& sigma, const Vec2& m, const ViscoplasticParams& vp, const ElasticModuli& mod) {
  Invariants r;
  r.p = sigma.mean();
  r.dev = sigma;
  r.dev.s.xx -= r.p;
  r.dev.s.yy -= r.p;
  r.dev.zz -= r.p;
  const Stress& s = r.dev;
  const double ss = ddot(s.s, s.s) + s.zz * s.zz;
  const double sst = ddot(s.s, s.s.transposed()) + s.zz * s.zz;
  const double phi = vp.a1 * ss + vp.a2 * sst + vp.a3 * dot(m, m) / (mod.l * mod.l);
  r.q = kSqrt3 * std::sqrt(std::max(phi, 0.0));
  return r;
}
}  // namespace

double plastic_potential(const Stress& sigma, const Vec2& m, const ViscoplasticParams& vp, const ElasticModuli& mod) {
  const Invariants inv = invariants(sigma, m, vp, mod);
  return inv.q + kSqrt3 * dp_coefficient(vp.psi) * inv.p;
}

YieldEval yield_and_potential(const Stress& sigma, const Vec2& m, double eps_hat, const ViscoplasticParams& vp,
                              const ElasticModuli& mod) {
  const Invariants inv = invariants(sigma, m, vp, mod);
  YieldEval y;
  y.p = inv.p;
  y.q = inv.q;
  y.cohesion = cohesion(eps_hat, vp);
  const double sphi = std::sin(vp.phi_f);
  const double B = 6.0 * std::cos(vp.phi_f) / (3.0 - sphi);
  y.f = inv.q + kSqrt3 * dp_coefficient(vp.phi_f) * inv.p - B * y.cohesion;

  if (inv.q > 0.0) {
    const double k = 3.0 / inv.q;
    y.dg_dsigma = k * (vp.a1 * inv.dev + vp.a2 * transpose(inv.dev));
    y.dg_dm = (k * vp.a3 / (mod.l * mod.l)) * m;
  }
  const double vol = dp_coefficient(vp.psi) / kSqrt3;
  y.dg_dsigma.s.xx += vol;
  y.dg_dsigma.s.yy += vol;
  y.dg_dsigma.zz += vol;
  return y;
}

double internal_variable_rate(const Mat2& d, double dzz, const Vec2& dk, double l) {
  const double tr = (d.xx + d.yy + dzz) / 3.0;
  Mat2 e = d;
  e.xx -= tr;
  e.yy -= tr;
  const double ezz = dzz - tr;
  const double ee = ddot(e, e) + ezz * ezz;
  const double eet = ddot(e, e.transposed()) + ezz * ezz;
  const double r = ee / 3.0 + eet / 3.0 + 2.0 / 3.0 * l * l * dot(dk, dk);
  return std::sqrt(std::max(r, 0.0));
}

double internal_variable_rate_closed_form(double f, double p, const ViscoplasticParams& vp) {
  const double sgn = p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
  return std::max(f, 0.0) / vp.eta * (1.0 + sgn * dp_coefficient(vp.psi) / kSqrt3);
}

bool viscoplastic_update(const Mat2& eps_total, const Vec2& kappa_total, ConstitutiveState& st,
                         const ViscoplasticParams& vp, const ElasticModuli& mod, double dt) {
  auto refresh = [&] {
    st.sigma = st.prestress + elastic_stress(eps_total - st.eps_vp, -st.eps_vp_zz, mod);
    st.m = elastic_couple_stress(kappa_total - st.kappa_vp, mod);
  };
  st.eps = eps_total;
  st.kappa = kappa_total;
  refresh();

  YieldEval y = yield_and_potential(st.sigma, st.m, st.eps_hat, vp, mod);
  if (!(y.f > 0.0)) return std::isfinite(y.f);

  // Forward Euler on the Perzyna flow, sub-divided so that the internal
  // variable moves by at most substep_limit per sub-step.
  const double estimate = dt * y.f / vp.eta * (1.0 + dp_coefficient(vp.psi));
  const int nsub = std::clamp(static_cast<int>(std::ceil(estimate / vp.substep_limit)), 1, 10000);
  const double h = dt / nsub;
  for (int s = 0; s < nsub; ++s) {
    if (s > 0) {
      y = yield_and_potential(st.sigma, st.m, st.eps_hat, vp, mod);
      if (!(y.f > 0.0)) break;
    }
    const double lam = h * y.f / vp.eta;
    const Mat2 de = lam * y.dg_dsigma.s;
    const double dzz = lam * y.dg_dsigma.zz;
    const Vec2 dk = lam * y.dg_dm;
    st.eps_vp += de;
    st.eps_vp_zz += dzz;
    st.kappa_vp += dk;
    st.eps_hat += internal_variable_rate(de, dzz, dk, mod.l);
    refresh();
  }
  return std::isfinite(st.sigma.s.xx) && std::isfinite(st.sigma.s.xy) && std::isfinite(st.sigma.s.yx) &&
         std::isfinite(st.sigma.s.yy) && std::isfinite(st.m.x) && std::isfinite(st.m.y);
}

void maxwell_update(const Mat2& eps_total, const Vec2& kappa_total, ConstitutiveState& st, double tau_r,
                    const ElasticModuli& mod, double dt) {
  const double d = decay_factor(dt, tau_r);
  const double hd = decay_factor(0.5 * dt, tau_r);
  const Mat2 de = eps_total - st.eps;
  const Vec2 dk = kappa_total - st.kappa;
  st.sigma = d * st.sigma + hd * elastic_stress(de, mod);
  st.m = d * st.m + hd * elastic_couple_stress(dk, mod);
  st.eps = eps_total;
  st.kappa = kappa_total;
}

BondStretch bond_stretch(const Vec2& ucomp, double omega, const Vec2& xi) {
  const double len = norm(xi);
  const Vec2 e = (1.0 / len) * xi;
  const Vec2 n{-e.y, e.x};
  return {dot(e, ucomp) / len, dot(n, ucomp) / len, omega};
}

void bond_viscoelastic_update(const BondStretch& inc, BondForceMemory& mem, const BondViscoParams& p, double dt) {
  const double d = decay_factor(dt, p.tau_r);
  const double hd = decay_factor(0.5 * dt, p.tau_r);
  mem.t1 = d * mem.t1 + hd * p.k1 * inc.s1;
  mem.t2 = d * mem.t2 + hd * p.k2 * inc.s2;
  mem.m = d * mem.m + hd * p.km * inc.dw;
}

BondViscoParams calibrate_bond_constants(const ElasticModuli& mod, double tau_r, double sum_len_vol, double k_xx) {
  if (!(sum_len_vol > 0.0 && k_xx > 0.0)) throw ConfigError("material.viscoelastic", "empty calibration family");
  BondViscoParams p;
  p.tau_r = tau_r;
  p.k1 = 4.0 * (mod.lambda + mod.mu) / sum_len_vol;
  p.k2 = 4.0 * mod.mu_c / sum_len_vol;
  p.km = mod.alpha_m / k_xx;
  return p;
}

double equivalent_plastic_shear(const Mat2& e_vp, double zz) {
  const double tr = (e_vp.xx + e_vp.yy + zz) / 3.0;
  const double xx = e_vp.xx - tr, yy = e_vp.yy - tr, z = zz - tr;
  const double xy = 0.5 * (e_vp.xy + e_vp.yx);
  return std::sqrt(2.0 / 3.0 * (xx * xx + yy * yy + z * z + 2.0 * xy * xy));
}

}  // namespace cppm
