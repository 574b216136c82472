#pragma once

// Material-point grid, horizon families and reference shape tensors.

#include <cstdint>
#include <span>
#include <vector>

#include "cppm/types.hpp"

namespace cppm {

struct GridSpec {
  long nx = 0;
  long ny = 0;
  double dx = 0.0;         // m
  double thickness = 0.0;  // m
  Vec2 origin{};           // lower-left domain corner
};

enum class DensityKind { partial, intrinsic };

struct DensitySpec {
  DensityKind kind = DensityKind::partial;
  double value = 0.0;  // rho^s when partial, rho_s when intrinsic (kg/m^3)
  double phi = 1.0;    // solid volume fraction
  /// Micro-inertia per unit volume (kg/m). Non-positive selects rho^s * l^2.
  double micro_inertia = 0.0;
  double cosserat_length = 0.0;  // m, used by the default micro-inertia
};

/// Bit flags marking kinematically constrained degrees of freedom.
enum Constraint : std::uint8_t { kFree = 0, kFixX = 1, kFixY = 2, kFixRot = 4 };

struct PointField {
  std::vector<Vec2> X, u, v, a;
  std::vector<double> w, wdot, wddot;
  std::vector<double> V, rho, J, phi;
  std::vector<std::uint8_t> bc;

  Index size() const { return X.size(); }
  double mass(Index i) const { return rho[i] * V[i]; }
  double rot_inertia(Index i) const { return J[i] * V[i]; }
  void resize(Index n);
};

/// Compressed per-point bond lists. Bond k of point i lives at
/// offsets[i] <= k < offsets[i+1]; reverse[k] is the (j,i) entry.
struct NeighborTable {
  std::vector<Index> offsets{0};
  std::vector<Index> neighbor;
  std::vector<Vec2> xi;         // reference bond X_j - X_i
  std::vector<double> length;   // |xi|
  std::vector<double> vol;      // V_j
  std::vector<double> omega;    // influence value, degraded by damage
  std::vector<Index> reverse;

  Index points() const { return offsets.size() - 1; }
  Index bonds() const { return neighbor.size(); }
  Index begin(Index i) const { return offsets[i]; }
  Index end(Index i) const { return offsets[i + 1]; }
  Index count(Index i) const { return offsets[i + 1] - offsets[i]; }
};

struct ShapeTensor {
  Mat2 K;
  Mat2 Kinv;
};

/// nx*ny points at cell centers; kinematic fields zero.
/// Throws ConfigError on non-positive dimensions or density data.
PointField build_grid(const GridSpec& grid, const DensitySpec& density);

/// All ordered pairs with 0 < |xi| <= delta, each list sorted by neighbor id.
NeighborTable find_neighbors(const PointField& points, double delta);

/// K = sum_j omega_ij xi (x) xi V_j. Throws DegenerateNeighborhood when singular.
ShapeTensor shape_tensor(Index point, const NeighborTable& table);

/// Same as shape_tensor but reports singularity through the return flag.
bool try_shape_tensor(Index point, const NeighborTable& table, ShapeTensor& out);

/// Grid row/column of a point built by build_grid.
inline long grid_col(const GridSpec& g, Index i) { return static_cast<long>(i) % g.nx; }
inline long grid_row(const GridSpec& g, Index i) { return static_cast<long>(i) / g.nx; }

}  // namespace cppm
