#pragma once

// Boundary regions, prescribed kinematics and boundary tractions.

#include <string>
#include <vector>

#include "cppm/config.hpp"
#include "cppm/dynamics.hpp"

namespace cppm {

class LoadSet {
 public:
  LoadSet() = default;
  LoadSet(const SimulationConfig& cfg, const PointField& fields);

  /// Sets constraint flags and overwrites prescribed displacement, velocity,
  /// rotation and spin at time t. Idempotent.
  void apply_kinematics(PointField& f, double t) const;

  /// Boundary tractions as forces on the outermost layer (traction * dx *
  /// thickness per point). Overwrites F_ext and L_ext.
  void external_forces(double t, StepForces& out) const;

  /// Points of a named boundary region.
  const std::vector<Index>& points(const std::string& name) const;

  /// Sum of a component of the internal force over a named region.
  double reaction(const StepForces& forces, const std::string& name, char component) const;

 private:
  struct Compiled {
    std::size_t spec = 0;  // index into boundaries_
    std::vector<Index> points;  // kinematic strip / box
    std::vector<Index> layer;   // outermost layer for tractions
    Vec2 normal;
  };
  std::vector<Boundary> boundaries_;
  std::vector<Compiled> compiled_;
  Index n_ = 0;
  double face_area_ = 0.0;
};

/// Applies kinematic boundary values of `config` at time t to a copy of `fields`.
PointField apply_loads(PointField fields, const SimulationConfig& config, double t);

/// True when the open segments (p, q) and (a, b) cross.
bool segments_cross(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b);

}  // namespace cppm
