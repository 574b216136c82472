#include "cppm/damage.hpp"

#include <algorithm>
#include <cmath>

namespace cppm {

double bilinear_factor(double s1_peak, double s0, double sc) {
  if (!std::isfinite(s0) || s1_peak < s0) return 1.0;
  if (s1_peak >= sc) return 0.0;
  return std::clamp((sc - s1_peak) / (sc - s0), 0.0, 1.0);
}

BondScalarStates bilinear_bond_law(double s1, const BondForceMemory& mem, BondDamage& dmg, double s0, double sc) {
  dmg.s1_peak = std::max(dmg.s1_peak, s1);
  const double w = dmg.broken ? 0.0 : std::min(dmg.omega, bilinear_factor(dmg.s1_peak, s0, sc));
  dmg.omega = w;
  if (w == 0.0) dmg.broken = true;
  return {w * mem.t1, w * mem.t2, w * mem.m, w};
}

void bond_energy_accumulate(double power, double dt, BondDamage& dmg) {
  dmg.W += 0.5 * dt * (dmg.P_prev + power);
  dmg.P_prev = power;
}

double critical_energy(double G_cr, double delta) {
  if (!(G_cr > 0.0)) throw ConfigError("damage.G_cr", "must be positive");
  if (!(delta > 0.0)) throw ConfigError("horizon", "must be positive");
  return 4.0 * G_cr / (M_PI * std::pow(delta, 4));
}

double fracture_energy_from_toughness(double K_I, double E, double nu) {
  if (!(K_I > 0.0)) throw ConfigError("damage.K_I", "must be positive");
  if (!(E > 0.0)) throw ConfigError("material.E", "must be positive");
  return K_I * K_I * (1.0 - nu * nu) / E;
}

bool breakage_check(BondDamage& dmg, double W_cr) {
  if (dmg.broken) {
    dmg.omega = 0.0;
    return false;
  }
  if (dmg.W >= W_cr) {
    dmg.broken = true;
    dmg.omega = 0.0;
    return true;
  }
  return false;
}

double local_damage(Index i, const NeighborTable& table) {
  double num = 0.0, den = 0.0;
  for (Index k = table.begin(i); k < table.end(i); ++k) {
    num += table.omega[k] * table.vol[k];
    den += table.vol[k];
  }
  if (den == 0.0) return 1.0;
  return 1.0 - num / den;
}

}  // namespace cppm
