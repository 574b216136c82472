#pragma once

// Stabilized correspondence force and moment states, and the assembly rule
// that turns bond states into point forces and torques.

#include "cppm/types.hpp"

namespace cppm {

struct StabilizationParams {
  double G1 = 0.0;
  double G2 = 0.0;
};

/// Micro-modulus E(1 - 4 nu) / (4 pi delta^2 (1 - nu - 2 nu^2)).
/// Vanishes at nu = 1/4 and is negative above it.
double micro_modulus(double E, double nu, double delta);

/// Dimensionless weighted volume sum_j omega V_j / (pi delta^2 t) of a full family.
double normalized_weighted_volume(double weighted_volume, double delta, double thickness);

struct StabilizationConstants {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = G1 (12 |D| / |xi|^3) omega / w0, beta = G2 (|D| / |xi|) omega / w0.
StabilizationConstants stabilization_constants(const StabilizationParams& p, double abs_D, double xi_len,
                                               double omega, double w0);

/// First moments of the weighted residuals over a family,
///   S = sum_j alpha V_j R1 (x) xi,   s = sum_j beta V_j R2 xi.
/// Passing sigma - S and m - s to the states below makes the stabilization
/// forces the exact gradient of sum (alpha |R1|^2 + beta R2^2) / 2.
struct ResidualMoments {
  Mat2 S;
  Vec2 s;
  void add(double alpha, double beta, double vol, const Vec2& xi, const Vec2& R1, double R2) {
    S += (alpha * vol) * outer(R1, xi);
    s += (beta * vol * R2) * xi;
  }
};

/// omega sigma K^-1 xi + alpha R1.
inline Vec2 force_state(const Mat2& sigma, const Mat2& Kinv, double omega, const Vec2& xi, double alpha,
                        const Vec2& R1) {
  return omega * (sigma * (Kinv * xi)) + alpha * R1;
}

/// omega m . K^-1 xi + beta R2.
inline double moment_state(const Vec2& m, const Mat2& Kinv, double omega, const Vec2& xi, double beta, double R2) {
  return omega * dot(m, Kinv * xi) + beta * R2;
}

/// Contribution of one ordered bond (i, j) to point i. The torque collects the
/// moment states and the couple of the antisymmetric force pair about the bond
/// midpoint.
struct BondLoad {
  Vec2 force;
  double torque = 0.0;
};
inline BondLoad bond_load(const Vec2& T_ij, const Vec2& T_ji, double M_ij, double M_ji, const Vec2& Y,
                          double vol_i, double vol_j) {
  const double vv = vol_i * vol_j;
  const Vec2 dT = T_ij - T_ji;
  return {vv * dT, vv * ((M_ij - M_ji) + 0.5 * cross(Y, dT))};
}

}  // namespace cppm
