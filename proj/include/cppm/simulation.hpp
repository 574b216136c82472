#pragma once

// Explicit time stepping of a configured scenario.

#include <vector>

#include "cppm/config.hpp"
#include "cppm/constitutive.hpp"
#include "cppm/damage.hpp"
#include "cppm/dynamics.hpp"
#include "cppm/loads.hpp"
#include "cppm/snapshot.hpp"

namespace cppm {

struct HistoryRow {
  long step = 0;
  double time = 0.0;
  double reaction = 0.0;
  double W_int = 0.0;
  double W_ext = 0.0;
  double W_kin = 0.0;
  bool audit_pass = true;
};

/// Crack-tracking threshold on the local damage field.
inline constexpr double kCrackDamage = 0.35;

class Simulation {
 public:
  explicit Simulation(SimulationConfig cfg, int threads = 1);

  /// Advances one step. Throws NumericalBreakdown on non-finite state.
  void step();

  long step_index() const { return step_; }
  double time() const { return step_ * cfg_.time.dt; }
  const SimulationConfig& config() const { return cfg_; }
  const GridSpec& grid() const { return grid_; }
  double horizon() const { return delta_; }
  const PointField& fields() const { return fields_; }
  const NeighborTable& table() const { return table_; }
  const StepForces& forces() const { return forces_; }
  const std::vector<ConstitutiveState>& states() const { return cs_; }
  const std::vector<double>& damage() const { return damage_; }
  /// First time each point's damage exceeded kCrackDamage, or -1.
  const std::vector<double>& crack_arrival() const { return crack_time_; }
  const EnergyLedger& ledger() const { return ledger_; }
  const AuditResult& last_audit() const { return audit_; }
  long audit_failures() const { return audit_failures_; }
  const BondViscoParams& bond_constants() const { return bondp_; }
  double critical_energy_density() const { return W_cr_; }
  const std::vector<BondDamage>& bond_damage() const { return dmg_; }

  double reaction_force() const;
  HistoryRow history_row() const;

  /// Output fields; second-order work is taken against the previous call.
  Snapshot snapshot();

  /// Micro-modulus magnitude used by the stabilization.
  double stabilization_modulus() const { return absD_; }
  bool stabilization_warning() const { return D_warning_; }

 private:
  void init_bond_constants();
  void refresh_point(Index i);
  void compute_internal(double dt);
  void damage_phase(double dt);
  void check_finite() const;
  Mat2 point_strain(Index i) const;

  SimulationConfig cfg_;
  int threads_ = 1;
  GridSpec grid_;
  double delta_ = 0.0;
  PointField fields_;
  NeighborTable table_;
  LoadSet loads_;
  ElasticModuli mod_;
  double absD_ = 0.0;
  bool D_warning_ = false;
  BondViscoParams bondp_;
  double W_cr_ = 0.0;
  bool tensorial_ = true;

  std::vector<ShapeTensor> shape_;
  std::vector<std::uint8_t> shape_ok_;
  std::vector<double> w0_;
  std::vector<ConstitutiveState> cs_;
  std::vector<std::uint8_t> bad_;

  std::vector<Vec2> T_;
  std::vector<double> M_;
  std::vector<double> alpha_, beta_;
  std::vector<Vec2> R1_;
  std::vector<double> R2_;
  std::vector<BondForceMemory> mem_;
  std::vector<BondDamage> dmg_;
  std::vector<std::uint8_t> changed_;
  std::vector<Vec2> u_eval_;
  std::vector<double> w_eval_;

  StepForces forces_, forces_prev_;
  KinematicState kin_prev_;
  EnergyLedger ledger_;
  AuditResult audit_;
  long audit_failures_ = 0;
  long step_ = 0;

  std::vector<double> damage_;
  std::vector<double> crack_time_;

  bool have_ref_ = false;
  std::vector<Mat2> sig_ref_, eps_ref_;
  std::vector<Vec2> m_ref_, kap_ref_;
};

}  // namespace cppm
