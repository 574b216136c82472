#include "cppm/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "cppm/correspondence.hpp"
#include "cppm/parallel.hpp"

namespace cppm {

void StepForces::resize(Index n) {
  F_int.assign(n, {});
  F_ext.assign(n, {});
  M_int.assign(n, 0.0);
  L_ext.assign(n, 0.0);
}

void StepForces::clear_internal() {
  std::fill(F_int.begin(), F_int.end(), Vec2{});
  std::fill(M_int.begin(), M_int.end(), 0.0);
}

void assemble(const NeighborTable& table, const PointField& f, std::span<const Vec2> T, std::span<const double> M,
              StepForces& out, int threads) {
  const Index n = table.points();
  parallel_for(n, threads, [&](Index i) {
    Vec2 F{};
    double tau = 0.0;
    for (Index k = table.begin(i); k < table.end(i); ++k) {
      const Index j = table.neighbor[k];
      const Index r = table.reverse[k];
      const Vec2 Y = table.xi[k] + (f.u[j] - f.u[i]);
      const BondLoad b = bond_load(T[k], T[r], M[k], M[r], Y, f.V[i], table.vol[k]);
      F += b.force;
      tau += b.torque;
    }
    out.F_int[i] = F;
    out.M_int[i] = tau;
  });
}

void assemble_reference(const NeighborTable& table, const PointField& f, std::span<const Vec2> T,
                        std::span<const double> M, StepForces& out) {
  out.clear_internal();
  for (Index i = 0; i < table.points(); ++i) {
    for (Index k = table.begin(i); k < table.end(i); ++k) {
      const Index j = table.neighbor[k];
      if (j < i) continue;
      const Index r = table.reverse[k];
      const double vv = f.V[i] * f.V[j];
      const Vec2 dT = T[k] - T[r];
      const Vec2 Y = f.X[j] + f.u[j] - f.X[i] - f.u[i];
      out.F_int[i] += vv * dT;
      out.F_int[j] -= vv * dT;
      const double couple = 0.5 * cross(Y, dT);
      out.M_int[i] += vv * ((M[k] - M[r]) + couple);
      out.M_int[j] += vv * ((M[r] - M[k]) + couple);
    }
  }
}

void newmark_predict(PointField& f, double dt, int threads) {
  const double h = 0.5 * dt;
  const double h2 = 0.5 * dt * dt;
  parallel_for(f.size(), threads, [&](Index i) {
    f.u[i] += dt * f.v[i] + h2 * f.a[i];
    f.v[i] += h * f.a[i];
    f.w[i] += dt * f.wdot[i] + h2 * f.wddot[i];
    f.wdot[i] += h * f.wddot[i];
  });
}

void newmark_correct(PointField& f, const StepForces& forces, double dt, int threads) {
  const double h = 0.5 * dt;
  parallel_for(f.size(), threads, [&](Index i) {
    const double m = f.mass(i);
    const double I = f.rot_inertia(i);
    Vec2 a = (1.0 / m) * (forces.F_int[i] + forces.F_ext[i]);
    double wa = (forces.M_int[i] + forces.L_ext[i]) / I;
    const std::uint8_t bc = f.bc[i];
    if (bc & kFixX) a.x = 0.0;
    if (bc & kFixY) a.y = 0.0;
    if (bc & kFixRot) wa = 0.0;
    f.a[i] = a;
    f.wddot[i] = wa;
    f.v[i] += h * a;
    f.wdot[i] += h * wa;
  });
}

void KinematicState::capture(const PointField& f) {
  u = f.u;
  v = f.v;
  w = f.w;
  wdot = f.wdot;
}

double kinetic_energy(const PointField& f) {
  double k = 0.0;
  for (Index i = 0; i < f.size(); ++i)
    k += 0.5 * f.mass(i) * dot(f.v[i], f.v[i]) + 0.5 * f.rot_inertia(i) * f.wdot[i] * f.wdot[i];
  return k;
}

AuditResult energy_audit(EnergyLedger& L, const PointField& f, const KinematicState& s0, const StepForces& F0,
                         const StepForces& F1, double tol) {
  double d_int = 0.0, d_ext = 0.0, kin = 0.0;
  for (Index i = 0; i < f.size(); ++i) {
    const double m = f.mass(i);
    const double I = f.rot_inertia(i);
    const Vec2 du = f.u[i] - s0.u[i];
    const double dw = f.w[i] - s0.w[i];
    const Vec2 Fi = 0.5 * (F0.F_int[i] + F1.F_int[i]);
    const Vec2 Fe = 0.5 * (F0.F_ext[i] + F1.F_ext[i]);
    const double Mi = 0.5 * (F0.M_int[i] + F1.M_int[i]);
    const double Le = 0.5 * (F0.L_ext[i] + F1.L_ext[i]);
    const std::uint8_t bc = f.bc[i];

    const double wx = Fi.x * du.x, wy = Fi.y * du.y, wr = Mi * dw;
    d_int -= wx + wy + wr;
    // Free DOFs: body-force work. Constrained DOFs: reaction plus body force
    // equals the kinetic-energy change minus the internal-force work.
    auto ext = [&](bool fixed, double inertia, double v0, double v1, double w_int, double w_body) {
      return fixed ? 0.5 * inertia * (v1 * v1 - v0 * v0) - w_int : w_body;
    };
    d_ext += ext(bc & kFixX, m, s0.v[i].x, f.v[i].x, wx, Fe.x * du.x);
    d_ext += ext(bc & kFixY, m, s0.v[i].y, f.v[i].y, wy, Fe.y * du.y);
    d_ext += ext(bc & kFixRot, I, s0.wdot[i], f.wdot[i], wr, Le * dw);
    kin += 0.5 * m * dot(f.v[i], f.v[i]) + 0.5 * I * f.wdot[i] * f.wdot[i];
  }
  L.W_int += d_int;
  L.W_ext += d_ext;
  L.W_kin = kin;
  AuditResult r;
  r.imbalance = std::abs(L.W_int + (L.W_kin - L.W_kin0) - L.W_ext);
  r.scale = std::max({std::abs(L.W_int), std::abs(L.W_ext), L.W_kin});
  r.pass = std::isfinite(r.imbalance) && r.imbalance <= tol * r.scale;
  return r;
}

}  // namespace cppm
