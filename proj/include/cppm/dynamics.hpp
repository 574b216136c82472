#pragma once

// Force assembly, explicit central-difference integration and the energy audit.

#include <span>
#include <vector>

#include "cppm/geometry.hpp"

namespace cppm {

struct StepForces {
  std::vector<Vec2> F_int;
  std::vector<Vec2> F_ext;
  std::vector<double> M_int;  // moment states plus the couple of the force pair
  std::vector<double> L_ext;

  void resize(Index n);
  void clear_internal();
};

/// Gathers per-point internal forces and torques from the bond states. Each
/// point sums its own bonds in table order, so the result does not depend on
/// the worker count. Y uses the current displacements in `fields`.
void assemble(const NeighborTable& table, const PointField& fields, std::span<const Vec2> T,
              std::span<const double> M, StepForces& out, int threads = 1);

/// Serial scatter over bonds; the straightforward reference for assemble.
void assemble_reference(const NeighborTable& table, const PointField& fields, std::span<const Vec2> T,
                        std::span<const double> M, StepForces& out);

/// u += dt v + dt^2/2 a, v += dt/2 a (and the rotational analogue).
void newmark_predict(PointField& f, double dt, int threads = 1);

/// Accelerations from the total forces, then v += dt/2 a. Constrained
/// degrees of freedom get zero acceleration.
void newmark_correct(PointField& f, const StepForces& forces, double dt, int threads = 1);

struct EnergyLedger {
  double W_int = 0.0;  // energy absorbed by internal forces
  double W_ext = 0.0;  // work of body forces and boundary reactions
  double W_kin = 0.0;
  double W_kin0 = 0.0;  // kinetic energy at t = 0
};

struct KinematicState {
  std::vector<Vec2> u, v;
  std::vector<double> w, wdot;
  void capture(const PointField& f);
};

struct AuditResult {
  double imbalance = 0.0;
  double scale = 0.0;
  bool pass = true;
};

/// Trapezoidal work increments between two states. Reaction work on
/// constrained degrees of freedom is whatever closes their own kinetic balance.
AuditResult energy_audit(EnergyLedger& ledger, const PointField& f1, const KinematicState& s0,
                         const StepForces& forces0, const StepForces& forces1, double tol = 1e-2);

double kinetic_energy(const PointField& f);

/// d sigma : d eps + d m . d kappa.
inline double second_order_work(const Mat2& d_sigma, const Mat2& d_eps, const Vec2& d_m, const Vec2& d_kappa) {
  return ddot(d_sigma, d_eps) + dot(d_m, d_kappa);
}

}  // namespace cppm
