#pragma once

// Bond-level kinematic states and the nonlocal strain / wryness measures.
//
// All functions take the displacement-like and rotation-like fields as spans so
// the same code evaluates deformation states (u, w) and their rates (v, wdot).
// Cross products use the reference bond xi (small deformation).

#include <span>

#include "cppm/geometry.hpp"

namespace cppm {

struct BondStates {
  Vec2 Y;          // deformed bond xi + U
  Vec2 U;          // u_j - u_i
  double Omega;    // w_j - w_i
  double OmegaBar; // (w_j + w_i) / 2
  Vec2 Ucomp;      // U - OmegaBar e_z x xi
};

/// States of bond k (owned by point i).
BondStates bond_states(Index i, Index k, const NeighborTable& table, std::span<const Vec2> u,
                       std::span<const double> w);

inline BondStates bond_states(Index i, Index k, const PointField& f, const NeighborTable& table) {
  return bond_states(i, k, table, f.u, f.w);
}

/// [sum_j omega Ucomp (x) xi V_j] K^-1.
Mat2 nonlocal_strain(Index i, const NeighborTable& table, const Mat2& Kinv, std::span<const Vec2> u,
                     std::span<const double> w);

/// [sum_j omega Omega xi V_j] K^-1, as a row vector.
Vec2 nonlocal_wryness(Index i, const NeighborTable& table, const Mat2& Kinv, std::span<const double> w);

/// Strain measure of an arbitrary per-bond vector state (indexed by bond).
Mat2 strain_of_state(Index i, const NeighborTable& table, const Mat2& Kinv, std::span<const Vec2> state);
/// Wryness measure of an arbitrary per-bond scalar state (indexed by bond).
Vec2 wryness_of_state(Index i, const NeighborTable& table, const Mat2& Kinv, std::span<const double> state);

struct Residuals {
  Vec2 R1;    // Ucomp - eps xi
  double R2;  // Omega - kappa . xi
};

inline Residuals residual_states(const BondStates& b, const Vec2& xi, const Mat2& eps, const Vec2& kappa) {
  return {b.Ucomp - eps * xi, b.Omega - dot(kappa, xi)};
}

}  // namespace cppm
