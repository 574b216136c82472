#include <map>

#include "cppm/config.hpp"

namespace cppm {

namespace {

// Single shear band under non-symmetric biaxial compression.
const char* kExample1 = R"(name: example1
geometry:
  nx: 28
  ny: 98
  dx: 1.43e-3
  thickness: 0.08
  horizon_factor: 2.05
material:
  model: viscoplastic
  density_kind: partial
  density: 1650
  volume_fraction: 0.65
  E: 50.4e6
  nu: 0.4
  mu_c_ratio: 2.0
  cosserat_length: 1.0e-3
  viscoplastic:
    cohesion: 0.13e6
    softening_modulus: -1.5e6
    friction_angle_deg: 42
    dilation_angle_deg: 33
    viscosity: 3000
stabilization:
  G1: 0.0175
  G2: 0.0017
damage:
  mode: none
loading:
  initial_pressure: 0.2e6
  boundaries:
    - name: top
      region: {side: top}
      ux: {law: velocity, rate: 0.029}
      uy: {law: velocity, rate: -0.1}
      rot: {law: fixed}
    - name: bottom
      region: {side: bottom}
      ux: {law: fixed}
      uy: {law: velocity, rate: 0.1}
      rot: {law: fixed}
    - name: left
      region: {side: left}
      traction: {law: constant, value: -0.2e6}
    - name: right
      region: {side: right}
      traction: {law: constant, value: -0.2e6}
  reaction: {boundary: top, component: y}
time:
  dt: 3.0e-6
  n_steps: 10000
output:
  snapshot_interval: 1000
  directory: out/example1
  format: csv
)";

// Notched three-point bending, bond-based visco-elastic channel with
// bilinear softening.
const char* kExample2 = R"(name: example2
geometry:
  nx: 191
  ny: 24
  dx: 3.0e-3
  thickness: 0.05
  horizon_factor: 2.05
  notch: {x0: 0.285, y0: 0.0, x1: 0.285, y1: 0.044}
material:
  model: bond_viscoelastic
  density_kind: intrinsic
  density: 2750
  volume_fraction: 0.89
  E: 450.0e6
  nu: 0.2
  mu_c_ratio: 0.3333333333333333
  cosserat_length: 2.0e-3
  viscoelastic:
    relaxation_time: 8.0e-3
stabilization:
  G1: 0.0
  G2: 0.0
damage:
  mode: bilinear
  s0: 0.0043
  sc: 0.056
loading:
  boundaries:
    - name: load
      region: {side: box, x0: 0.282, y0: 0.063, x1: 0.291, y1: 0.072}
      uy: {law: cosine, amplitude: -8.0e-3, t1: 2.28e-2}
    - name: support_left
      region: {side: box, x0: 0.0, y0: 0.0, x1: 0.009, y1: 0.009}
      ux: {law: fixed}
      uy: {law: fixed}
    - name: support_right
      region: {side: box, x0: 0.564, y0: 0.0, x1: 0.573, y1: 0.009}
      uy: {law: fixed}
  reaction: {boundary: load, component: y}
time:
  dt: 2.0e-6
  n_steps: 3800
output:
  snapshot_interval: 500
  directory: out/example2
  format: csv
)";

// Conjugate shear bands under symmetric biaxial compression.
const char* kExample3 = R"(name: example3
geometry:
  nx: 40
  ny: 80
  dx: 2.5e-3
  thickness: 0.1
  horizon_factor: 2.05
material:
  model: viscoplastic
  density_kind: partial
  density: 2000
  volume_fraction: 0.65
  E: 50.0e6
  nu: 0.2
  mu_c_ratio: 2.0
  cosserat_length: 2.0e-3
  viscoplastic:
    cohesion: 0.5e6
    softening_modulus: -1.0e6
    friction_angle_deg: 35
    dilation_angle_deg: 20
    viscosity: 1.0e4
stabilization:
  G1: 0.01
  G2: 0.001
damage:
  mode: none
loading:
  initial_pressure: 0.1e6
  boundaries:
    - name: top
      region: {side: top}
      ux: {law: fixed}
      uy: {law: ramp, value: -4.5e-3, t0: 1.0e-2}
      rot: {law: fixed}
    - name: bottom
      region: {side: bottom}
      ux: {law: fixed}
      uy: {law: ramp, value: 4.5e-3, t0: 1.0e-2}
      rot: {law: fixed}
    - name: left
      region: {side: left}
      traction: {law: constant, value: -0.1e6}
    - name: right
      region: {side: right}
      traction: {law: constant, value: -0.1e6}
  reaction: {boundary: top, component: y}
time:
  dt: 7.0e-6
  n_steps: 1429
output:
  snapshot_interval: 143
  directory: out/example3
  format: csv
)";

// Dynamic crack branching from a pre-notch under tensile stress ramps.
const char* kExample4 = R"(name: example4
geometry:
  nx: 200
  ny: 80
  dx: 0.5e-3
  thickness: 0.01
  horizon_factor: 4.05
  notch: {x0: 0.0, y0: 0.02, x1: 0.05, y1: 0.02}
material:
  model: bond_viscoelastic
  density_kind: intrinsic
  density: 2650
  volume_fraction: 0.95
  E: 35.0e9
  nu: 0.25
  mu_c_ratio: 0.3333333333333333
  cosserat_length: 2.0e-3
  viscoelastic:
    relaxation_time: 1.0e-4
stabilization:
  G1: 0.1
  G2: 0.01
damage:
  mode: energy
  G_cr: 160
  critical_energy_scale: 0.12
loading:
  boundaries:
    - name: top
      region: {side: top}
      traction: {law: ramp, value: 8.0e6, t0: 6.25e-6}
    - name: bottom
      region: {side: bottom}
      traction: {law: ramp, value: 8.0e6, t0: 6.25e-6}
time:
  dt: 2.5e-8
  n_steps: 1700
output:
  snapshot_interval: 340
  directory: out/example4
  format: csv
)";

const std::map<std::string, std::string>& table() {
  static const std::map<std::string, std::string> t{
      {"example1", kExample1}, {"example2", kExample2}, {"example3", kExample3}, {"example4", kExample4}};
  return t;
}

}  // namespace

const std::string& preset_text(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) throw ConfigError("preset", "unknown preset '" + name + "'");
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : table()) names.push_back(k);
  return names;
}

}  // namespace cppm
