#pragma once

// Local micropolar constitutive updates for the plane-strain problem.
//
// Stress is carried as a non-symmetric in-plane tensor plus the out-of-plane
// normal component so that pressure and deviatoric invariants use the full
// 3D trace. The couple stress and wryness are 2-vectors (the z-row of the 3D
// tensors for a scalar out-of-plane micro-rotation).

#include "cppm/types.hpp"

namespace cppm {

struct Stress {
  Mat2 s;          // in-plane, non-symmetric
  double zz = 0.0;

  double mean() const { return (s.xx + s.yy + zz) / 3.0; }
  Stress& operator+=(const Stress& o) { s += o.s; zz += o.zz; return *this; }
  friend Stress operator+(Stress a, const Stress& b) { return a += b; }
  friend Stress operator-(Stress a, const Stress& b) { a.s -= b.s; a.zz -= b.zz; return a; }
  friend Stress operator*(double k, Stress a) { a.s *= k; a.zz *= k; return a; }
};

struct ElasticModuli {
  double E = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  double mu_c = 0.0;
  double l = 0.0;        // Cosserat length (m)
  double alpha_m = 0.0;  // couple-stress modulus 2 mu l^2 (Pa m^2)

  /// Throws ConfigError when E <= 0, nu outside (-1, 0.5), mu_c < 0 or l <= 0.
  static ElasticModuli from(double E, double nu, double mu_c, double l);
  static ElasticModuli from_ratio(double E, double nu, double mu_c_over_mu, double l);
};

struct ViscoplasticParams {
  double c0 = 0.0;      // initial cohesion (Pa)
  double h = 0.0;       // softening (<0) / hardening modulus (Pa)
  double phi_f = 0.0;   // friction angle (rad)
  double psi = 0.0;     // dilation angle (rad)
  double eta = 0.0;     // viscosity (Pa s)
  double a1 = 0.25, a2 = 0.25, a3 = 0.5;
  double c_floor_ratio = 1e-3;
  double substep_limit = 1e-4;  // max internal-variable increment per sub-step

  void validate() const;
};

struct ConstitutiveState {
  Stress sigma;
  Vec2 m;
  Mat2 eps;          // last total strain seen by the update
  Vec2 kappa;        // last total wryness
  Mat2 eps_vp;
  double eps_vp_zz = 0.0;
  Vec2 kappa_vp;
  double eps_hat = 0.0;
  Stress prestress;  // initial (geostatic) effective stress
};

/// sigma = lambda tr(e) 1 + (mu + mu_c) e + (mu - mu_c) e^T, with the
/// out-of-plane strain entering the trace and sigma_zz.
Stress elastic_stress(const Mat2& eps_e, double eps_e_zz, const ElasticModuli& mod);
inline Stress elastic_stress(const Mat2& eps_e, const ElasticModuli& mod) { return elastic_stress(eps_e, 0.0, mod); }

inline Vec2 elastic_couple_stress(const Vec2& kappa_e, const ElasticModuli& mod) { return mod.alpha_m * kappa_e; }

/// 2 sin(a) / (sqrt(3) (3 - sin(a))).
double dp_coefficient(double angle);

struct YieldEval {
  double f = 0.0;
  double q = 0.0;
  double p = 0.0;
  double cohesion = 0.0;
  Stress dg_dsigma;  // includes the zz component
  Vec2 dg_dm;
};

double cohesion(double eps_hat, const ViscoplasticParams& vp);

/// Drucker-Prager yield function and the gradient of the plastic potential.
YieldEval yield_and_potential(const Stress& sigma, const Vec2& m, double eps_hat, const ViscoplasticParams& vp,
                              const ElasticModuli& mod);

/// Plastic potential value, exposed for finite-difference checks.
double plastic_potential(const Stress& sigma, const Vec2& m, const ViscoplasticParams& vp, const ElasticModuli& mod);

/// Rate of the internal variable from visco-plastic strain/wryness rates
/// (deviatoric strain rate, wryness weighted by l^2).
double internal_variable_rate(const Mat2& deps_vp, double deps_vp_zz, const Vec2& dkappa_vp, double l);
/// <f>/eta [1 + sign(p) A3/sqrt(3)].
double internal_variable_rate_closed_form(double f, double p, const ViscoplasticParams& vp);

/// Explicit Perzyna update at total strain/wryness. Returns false on a
/// non-finite result (state left partially updated).
bool viscoplastic_update(const Mat2& eps_total, const Vec2& kappa_total, ConstitutiveState& st,
                         const ViscoplasticParams& vp, const ElasticModuli& mod, double dt);

/// Maxwell recurrence for one step given total strain and wryness at the
/// end of the step: sigma <- e^{-dt/tau} sigma + C(d eps) e^{-dt/(2 tau)}.
void maxwell_update(const Mat2& eps_total, const Vec2& kappa_total, ConstitutiveState& st, double tau_r,
                    const ElasticModuli& mod, double dt);

// ---------------------------------------------------------------------------
// Bond-based visco-elastic channel.

struct BondViscoParams {
  double tau_r = 0.0;
  double k1 = 0.0;  // axial (N/m^6 per unit stretch)
  double k2 = 0.0;  // transverse
  double km = 0.0;  // rotational (N m/m^6 per rad)
};

/// Axial and transverse composite-stretch components and the relative
/// rotation of a bond; works on increments as well as on rates. Signed.
struct BondStretch {
  double s1 = 0.0;
  double s2 = 0.0;
  double dw = 0.0;
};
BondStretch bond_stretch(const Vec2& ucomp, double omega, const Vec2& xi);

struct BondForceMemory {
  double t1 = 0.0;
  double t2 = 0.0;
  double m = 0.0;
};

/// Exponential Maxwell recurrence per channel for stretch increments.
void bond_viscoelastic_update(const BondStretch& increment, BondForceMemory& mem, const BondViscoParams& p,
                              double dt);

/// Energy-equivalent bond constants for an interior family: isotropic
/// dilatation fixes k1, uniform relative rotation fixes k2, uniform wryness
/// fixes km. sum_len_vol = sum_j |xi| V_j, k_xx = sum_j xi_x^2 V_j.
BondViscoParams calibrate_bond_constants(const ElasticModuli& mod, double tau_r, double sum_len_vol, double k_xx);

/// Equivalent plastic shear strain sqrt(2/3 e:e) of the symmetric deviatoric
/// visco-plastic strain (3D, including zz).
double equivalent_plastic_shear(const Mat2& eps_vp, double eps_vp_zz);

}  // namespace cppm
