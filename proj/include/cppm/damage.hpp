#pragma once

// Bond failure: bilinear stretch softening, energy-based breakage and the
// local damage field.

#include "cppm/constitutive.hpp"
#include "cppm/geometry.hpp"

namespace cppm {

struct BondDamage {
  double s1_peak = 0.0;
  double W = 0.0;        // accumulated bond energy density (J/m^6)
  double P_prev = 0.0;   // bond power density at the previous step
  double omega = 1.0;
  bool broken = false;
};

/// Linear ramp between s0 and sc driven by the historical peak stretch.
/// Infinite thresholds leave the bond intact.
double bilinear_factor(double s1_peak, double s0, double sc);

struct BondScalarStates {
  double t1 = 0.0;
  double t2 = 0.0;
  double m = 0.0;
  double omega = 1.0;
};

/// Updates the peak stretch with s1 and returns the degraded states.
BondScalarStates bilinear_bond_law(double s1, const BondForceMemory& undamaged, BondDamage& dmg, double s0,
                                   double sc);

/// Bond power density (T_ij - T_ji) . dUcomp + (M_ij - M_ji) dOmega.
inline double bond_power(const Vec2& T_ij, const Vec2& T_ji, double M_ij, double M_ji, const Vec2& ucomp_rate,
                         double omega_rate) {
  return dot(T_ij - T_ji, ucomp_rate) + (M_ij - M_ji) * omega_rate;
}

/// Trapezoidal accumulation W += dt (P_prev + P) / 2.
void bond_energy_accumulate(double power, double dt, BondDamage& dmg);

/// 4 G / (pi delta^4).
double critical_energy(double G_cr, double delta);

/// K^2 (1 - nu^2) / E.
double fracture_energy_from_toughness(double K_I, double E, double nu);

/// Breaks the bond when W >= W_cr. Returns true when the bond broke now.
bool breakage_check(BondDamage& dmg, double W_cr);

/// 1 - sum(omega V) / sum(V); 1 for a point with no bonds.
double local_damage(Index i, const NeighborTable& table);

}  // namespace cppm
