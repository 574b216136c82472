#pragma once

// Scenario configuration: schema, YAML loading, overrides and shipped presets.

#include <optional>
#include <string>
#include <vector>

#include "cppm/constitutive.hpp"
#include "cppm/correspondence.hpp"
#include "cppm/geometry.hpp"

namespace YAML {
class Node;
}

namespace cppm {

enum class ModelKind { viscoplastic, maxwell_viscoelastic, bond_viscoelastic };
enum class DamageMode { none, bilinear, energy };
enum class OutputFormat { csv, vtk, both };

struct Segment {
  Vec2 a, b;
};

struct GeometryConfig {
  long nx = 0;
  long ny = 0;
  double dx = 0.0;
  double thickness = 0.0;
  double horizon_factor = 0.0;  // delta = horizon_factor * dx
  std::optional<Segment> notch;

  double horizon() const { return horizon_factor * dx; }
};

struct MaterialConfig {
  ModelKind model = ModelKind::viscoplastic;
  DensityKind density_kind = DensityKind::partial;
  double density = 0.0;
  double volume_fraction = 1.0;
  double E = 0.0;
  double nu = 0.0;
  double mu_c_ratio = 0.0;  // mu_c / mu
  double cosserat_length = 0.0;
  double micro_inertia = 0.0;  // <= 0: rho l^2
  ViscoplasticParams viscoplastic;
  double relaxation_time = 0.0;
  std::optional<double> k1, k2, km;  // bond constants; calibrated when absent

  ElasticModuli moduli() const { return ElasticModuli::from_ratio(E, nu, mu_c_ratio, cosserat_length); }
};

struct DamageConfig {
  DamageMode mode = DamageMode::none;
  double s0 = 0.0;
  double sc = 0.0;
  std::optional<double> G_cr;
  std::optional<double> K_I;
  double critical_energy_scale = 1.0;
};

enum class LawKind { fixed, velocity, cosine, ramp, constant };

/// Time law for a prescribed displacement or traction.
///   fixed:    0
///   velocity: rate * t
///   cosine:   amplitude/2 (1 - cos(pi t / t1)) for t < t1, amplitude after
///   ramp:     value * t / t0 for t < t0, value after
///   constant: value
struct Law {
  LawKind kind = LawKind::fixed;
  double rate = 0.0;
  double amplitude = 0.0;
  double t1 = 0.0;
  double value = 0.0;
  double t0 = 0.0;

  double at(double t) const;
  double rate_at(double t) const;
};

enum class Side { top, bottom, left, right, box };

struct Region {
  Side side = Side::top;
  int depth = 0;  // rows/columns of a side strip; 0 selects ceil(delta/dx)
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // box bounds (m, inclusive)
};

struct Boundary {
  std::string name;
  Region region;
  std::optional<Law> ux, uy, rot;
  std::optional<Law> traction;  // normal traction on a side, tension positive
};

struct LoadingConfig {
  std::vector<Boundary> boundaries;
  double initial_pressure = 0.0;  // isotropic geostatic compression (Pa)
  std::string reaction_boundary;
  char reaction_component = 'y';
};

struct TimeConfig {
  double dt = 0.0;
  long n_steps = 0;
};

struct OutputConfig {
  long snapshot_interval = 0;  // 0: initial and final only
  std::string directory = "out";
  OutputFormat format = OutputFormat::csv;
  bool snapshots = true;
};

struct SimulationConfig {
  std::string name = "custom";
  GeometryConfig geometry;
  MaterialConfig material;
  StabilizationParams stabilization;
  DamageConfig damage;
  LoadingConfig loading;
  TimeConfig time;
  OutputConfig output;
  double audit_tolerance = 1e-2;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// Parses and validates a YAML document; unknown keys are errors.
SimulationConfig parse_config(const YAML::Node& root);
SimulationConfig load_config(const std::string& path);
SimulationConfig load_config_text(const std::string& yaml, const std::vector<std::string>& overrides = {});

/// Applies "dotted.key=value" to a YAML tree. Sequence entries are addressed
/// by index, by the value of their `name` key, or "*" for every entry.
void apply_override(YAML::Node& root, const std::string& assignment);

/// YAML text of a shipped preset (example1..example4).
const std::string& preset_text(const std::string& name);
std::vector<std::string> preset_names();
SimulationConfig preset(const std::string& name, const std::vector<std::string>& overrides = {});

}  // namespace cppm
