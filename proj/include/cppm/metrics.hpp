#pragma once

// Post-processing: shear-band inclination and crack growth/branching times.

#include <cstdint>
#include <optional>
#include <vector>

#include "cppm/snapshot.hpp"

namespace cppm {

/// Integer lattice recovered from cell-centred point coordinates.
struct LatticeIndex {
  double dx = 0.0;
  double xmin = 0.0, ymin = 0.0;
  long nx = 0, ny = 0;
  std::vector<long> col, row;           // per point
  std::vector<long> at;                 // row * nx + col -> point, -1 when empty
  long index(long c, long r) const { return (c < 0 || r < 0 || c >= nx || r >= ny) ? -1 : at[r * nx + c]; }
};
LatticeIndex infer_lattice(const std::vector<Vec2>& X);

/// 8-connected components of the points with mask[i] != 0.
std::vector<std::vector<Index>> connected_components(const LatticeIndex& lat, const std::vector<std::uint8_t>& mask);

struct BandOptions {
  double threshold_frac = 0.5;
  int exclude_bottom_rows = 0;
  int exclude_top_rows = 0;
  int exclude_left_cols = 0;
  int exclude_right_cols = 0;
  double min_component_frac = 0.2;  // relative to the largest component
};

struct BandMeasurement {
  bool localized = false;
  double principal_angle = 0.0;          // principal axis of the largest component
  double elongation = 0.0;               // its length/width ratio
  std::vector<double> component_angles;  // principal axis per significant component
  std::vector<double> conjugate_angles;  // two bands: separate components or a crossing split
  std::vector<std::uint8_t> in_band;     // thresholded set
  static double mean(const std::vector<double>& a);
};

/// Angles (degrees from horizontal) of the bands traced by the points whose
/// value is at least threshold_frac of the maximum. A single crossing
/// component is split into its two densest straight strips.
BandMeasurement measure_band_angle(const std::vector<Vec2>& X, const std::vector<double>& value,
                                   const BandOptions& opt = {});
inline BandMeasurement measure_band_angle(const Snapshot& s, const BandOptions& opt = {}) {
  return measure_band_angle(s.X, s.eq_plastic_shear, opt);
}

/// Acute angle (degrees, [0, 90]) between a direction and the horizontal.
double acute_angle_deg(const Vec2& dir);

struct DamageFrame {
  double time = 0.0;
  std::vector<double> damage;
};

struct BranchOptions {
  double threshold = 0.35;
  Vec2 notch_tip;          // crack assumed to run in +x from here
  double min_advance = 2.0;  // cells of tip advance that count as growth
  int min_gap = 2;           // empty cells separating two arms
};

struct BranchTiming {
  std::optional<double> growth_start;
  std::optional<double> branch_start;
  std::optional<double> branch_end;
};

BranchTiming measure_branch_timing(const std::vector<Vec2>& X, const std::vector<DamageFrame>& frames,
                                   const BranchOptions& opt);

/// Frames at every distinct arrival time of a monotone damage field given
/// the first time each point crossed the threshold (-1: never).
std::vector<DamageFrame> frames_from_arrival(const std::vector<double>& arrival, double threshold = 0.35);

}  // namespace cppm
