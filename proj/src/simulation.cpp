#include "cppm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cppm/correspondence.hpp"
#include "cppm/parallel.hpp"
#include "cppm/states.hpp"

namespace cppm {

void Snapshot::resize(Index n) {
  id.resize(n);
  X.resize(n);
  u.resize(n);
  v.resize(n);
  omega.resize(n);
  eps.resize(n);
  eq_plastic_shear.resize(n);
  plastic_volume.resize(n);
  eps_hat.resize(n);
  damage.resize(n);
  second_order_work.resize(n);
}

Simulation::Simulation(SimulationConfig cfg, int threads) : cfg_(std::move(cfg)), threads_(std::max(1, threads)) {
  cfg_.validate();
  const auto& g = cfg_.geometry;
  const auto& m = cfg_.material;
  grid_ = {g.nx, g.ny, g.dx, g.thickness, {}};
  delta_ = g.horizon();
  fields_ = build_grid(grid_, {m.density_kind, m.density, m.volume_fraction, m.micro_inertia, m.cosserat_length});
  table_ = find_neighbors(fields_, delta_);
  mod_ = m.moduli();
  tensorial_ = m.model != ModelKind::bond_viscoelastic;

  const double D = micro_modulus(m.E, m.nu, delta_);
  absD_ = std::abs(D);
  D_warning_ = tensorial_ && (cfg_.stabilization.G1 > 0.0 || cfg_.stabilization.G2 > 0.0) && D <= 0.0;
  if (D_warning_)
    std::fprintf(stderr, "warning: micro-modulus is %s for nu = %g; using its magnitude for stabilization\n",
                 D == 0.0 ? "zero" : "negative", m.nu);

  const Index n = fields_.size();
  const Index nb = table_.bonds();
  dmg_.assign(nb, {});
  if (g.notch) {
    for (Index i = 0; i < n; ++i)
      for (Index k = table_.begin(i); k < table_.end(i); ++k)
        if (segments_cross(fields_.X[i], fields_.X[table_.neighbor[k]], g.notch->a, g.notch->b)) {
          table_.omega[k] = 0.0;
          dmg_[k].omega = 0.0;
          dmg_[k].broken = true;
        }
  }

  if (cfg_.damage.mode == DamageMode::energy) {
    double G = cfg_.damage.G_cr ? *cfg_.damage.G_cr : fracture_energy_from_toughness(*cfg_.damage.K_I, m.E, m.nu);
    W_cr_ = cfg_.damage.critical_energy_scale * critical_energy(G, delta_);
  }

  shape_.assign(n, {});
  shape_ok_.assign(n, 0);
  w0_.assign(n, 0.0);
  cs_.assign(n, {});
  bad_.assign(n, 0);
  T_.assign(nb, {});
  M_.assign(nb, 0.0);
  alpha_.assign(nb, 0.0);
  beta_.assign(nb, 0.0);
  if (tensorial_) {
    R1_.assign(nb, {});
    R2_.assign(nb, 0.0);
  }
  changed_.assign(n, 0);
  u_eval_.assign(n, {});
  w_eval_.assign(n, 0.0);
  damage_.assign(n, 0.0);
  crack_time_.assign(n, -1.0);
  if (!tensorial_) {
    mem_.assign(nb, {});
    init_bond_constants();
  }

  const double p0 = cfg_.loading.initial_pressure;
  for (Index i = 0; i < n; ++i) {
    if (p0 != 0.0) {
      cs_[i].prestress.s = {-p0, 0.0, 0.0, -p0};
      cs_[i].prestress.zz = -p0;
      cs_[i].sigma = cs_[i].prestress;
    }
  }
  parallel_for(n, threads_, [&](Index i) { refresh_point(i); });
  for (Index i = 0; i < n; ++i)
    if (damage_[i] > kCrackDamage) crack_time_[i] = 0.0;

  loads_ = LoadSet(cfg_, fields_);
  loads_.apply_kinematics(fields_, 0.0);
  forces_.resize(n);
  forces_prev_.resize(n);
  loads_.external_forces(0.0, forces_);
  compute_internal(0.0);
  check_finite();
  for (Index i = 0; i < n; ++i) {
    Vec2 a = (1.0 / fields_.mass(i)) * (forces_.F_int[i] + forces_.F_ext[i]);
    double wa = (forces_.M_int[i] + forces_.L_ext[i]) / fields_.rot_inertia(i);
    if (fields_.bc[i] & kFixX) a.x = 0.0;
    if (fields_.bc[i] & kFixY) a.y = 0.0;
    if (fields_.bc[i] & kFixRot) wa = 0.0;
    fields_.a[i] = a;
    fields_.wddot[i] = wa;
  }
  ledger_.W_kin = kinetic_energy(fields_);
  ledger_.W_kin0 = ledger_.W_kin;
}

void Simulation::init_bond_constants() {
  const auto& m = cfg_.material;
  const double hf = cfg_.geometry.horizon_factor;
  const double dx = cfg_.geometry.dx;
  const double V = dx * dx * cfg_.geometry.thickness;
  const long r = static_cast<long>(std::ceil(hf));
  double s1 = 0.0, kxx = 0.0;
  for (long a = -r; a <= r; ++a)
    for (long b = -r; b <= r; ++b) {
      const double d2 = static_cast<double>(a * a + b * b);
      if (d2 == 0.0 || d2 > hf * hf * (1.0 + 1e-12)) continue;
      s1 += std::sqrt(d2) * dx * V;
      kxx += a * a * dx * dx * V;
    }
  bondp_ = calibrate_bond_constants(mod_, m.relaxation_time, s1, kxx);
  if (m.k1) bondp_.k1 = *m.k1;
  if (m.k2) bondp_.k2 = *m.k2;
  if (m.km) bondp_.km = *m.km;
}

// Shape tensor, weighted volume, stabilization scalars and damage of point i.
void Simulation::refresh_point(Index i) {
  double wv = 0.0;
  for (Index k = table_.begin(i); k < table_.end(i); ++k) wv += table_.omega[k] * table_.vol[k];
  w0_[i] = normalized_weighted_volume(wv, delta_, cfg_.geometry.thickness);
  damage_[i] = local_damage(i, table_);
  if (!tensorial_) return;
  shape_ok_[i] = try_shape_tensor(i, table_, shape_[i]) ? 1 : 0;
  for (Index k = table_.begin(i); k < table_.end(i); ++k) {
    const auto s = stabilization_constants(cfg_.stabilization, absD_, table_.length[k], table_.omega[k], w0_[i]);
    alpha_[k] = s.alpha;
    beta_[k] = s.beta;
  }
}

void Simulation::compute_internal(double dt) {
  const Index n = fields_.size();
  const auto& f = fields_;
  if (tensorial_) {
    const bool plastic = cfg_.material.model == ModelKind::viscoplastic;
    parallel_for(n, threads_, [&](Index i) {
      if (!shape_ok_[i]) {
        for (Index k = table_.begin(i); k < table_.end(i); ++k) {
          T_[k] = {};
          M_[k] = 0.0;
        }
        return;
      }
      const Mat2& Kinv = shape_[i].Kinv;
      const Mat2 eps = nonlocal_strain(i, table_, Kinv, f.u, f.w);
      const Vec2 kap = nonlocal_wryness(i, table_, Kinv, f.w);
      ConstitutiveState& st = cs_[i];
      if (plastic) {
        if (!viscoplastic_update(eps, kap, st, cfg_.material.viscoplastic, mod_, dt)) bad_[i] = 1;
      } else {
        maxwell_update(eps, kap, st, cfg_.material.relaxation_time, mod_, dt);
      }
      ResidualMoments rm;
      for (Index k = table_.begin(i); k < table_.end(i); ++k) {
        if (table_.omega[k] == 0.0) continue;
        const Residuals r = residual_states(bond_states(i, k, table_, f.u, f.w), table_.xi[k], eps, kap);
        R1_[k] = r.R1;
        R2_[k] = r.R2;
        rm.add(alpha_[k], beta_[k], table_.vol[k], table_.xi[k], r.R1, r.R2);
      }
      const Mat2 sig = st.sigma.s - rm.S;
      const Vec2 mc = st.m - rm.s;
      for (Index k = table_.begin(i); k < table_.end(i); ++k) {
        const double om = table_.omega[k];
        if (om == 0.0) {
          T_[k] = {};
          M_[k] = 0.0;
          continue;
        }
        const Vec2& xi = table_.xi[k];
        T_[k] = force_state(sig, Kinv, om, xi, alpha_[k], R1_[k]);
        M_[k] = moment_state(mc, Kinv, om, xi, beta_[k], R2_[k]);
      }
    });
  } else {
    parallel_for(n, threads_, [&](Index i) {
      const Vec2 dui = f.u[i] - u_eval_[i];
      const double dwi = f.w[i] - w_eval_[i];
      for (Index k = table_.begin(i); k < table_.end(i); ++k) {
        const Index j = table_.neighbor[k];
        const Vec2& xi = table_.xi[k];
        const Vec2 du = (f.u[j] - u_eval_[j]) - dui;
        const double dwj = f.w[j] - w_eval_[j];
        const Vec2 duc = du - perp(0.5 * (dwi + dwj), xi);
        bond_viscoelastic_update(bond_stretch(duc, dwj - dwi, xi), mem_[k], bondp_, dt);
        const double om = table_.omega[k];
        const double len = table_.length[k];
        const Vec2 e = (1.0 / len) * xi;
        const Vec2 nrm{-e.y, e.x};
        T_[k] = om * (mem_[k].t1 * e + mem_[k].t2 * nrm);
        M_[k] = om * mem_[k].m;
      }
    });
    parallel_for(n, threads_, [&](Index i) {
      u_eval_[i] = f.u[i];
      w_eval_[i] = f.w[i];
    });
  }
  assemble(table_, fields_, T_, M_, forces_, threads_);
}

void Simulation::check_finite() const {
  for (Index i = 0; i < fields_.size(); ++i) {
    const Vec2& F = forces_.F_int[i];
    if (bad_[i] || !std::isfinite(F.x) || !std::isfinite(F.y) || !std::isfinite(forces_.M_int[i]))
      throw NumericalBreakdown(i, step_, bad_[i] ? "non-finite stress" : "non-finite internal force");
  }
}

void Simulation::damage_phase(double dt) {
  const auto mode = cfg_.damage.mode;
  if (mode == DamageMode::none) return;
  const Index n = fields_.size();
  const auto& f = fields_;
  const double s0 = cfg_.damage.s0, sc = cfg_.damage.sc;
  parallel_for(n, threads_, [&](Index i) {
    std::uint8_t any = 0;
    for (Index k = table_.begin(i); k < table_.end(i); ++k) {
      const Index j = table_.neighbor[k];
      if (j < i) continue;
      BondDamage& d = dmg_[k];
      if (d.broken) continue;
      const Index r = table_.reverse[k];
      const double before = table_.omega[k];
      if (mode == DamageMode::energy) {
        const Vec2 ucr = (f.v[j] - f.v[i]) - perp(0.5 * (f.wdot[i] + f.wdot[j]), table_.xi[k]);
        const double P = bond_power(T_[k], T_[r], M_[k], M_[r], ucr, f.wdot[j] - f.wdot[i]);
        bond_energy_accumulate(P, dt, d);
        breakage_check(d, W_cr_);
      } else {
        const BondStates b = bond_states(i, k, table_, f.u, f.w);
        const double len = table_.length[k];
        d.s1_peak = std::max(d.s1_peak, dot(b.Ucomp, table_.xi[k]) / (len * len));
        d.omega = std::min(d.omega, bilinear_factor(d.s1_peak, s0, sc));
        if (d.omega == 0.0) d.broken = true;
      }
      if (d.omega != before) {
        table_.omega[k] = d.omega;
        table_.omega[r] = d.omega;
        dmg_[r] = d;
        any = 1;
      }
    }
    changed_[i] = any;
  });

  std::vector<std::uint8_t> dirty;
  for (Index i = 0; i < n; ++i) {
    if (!changed_[i]) continue;
    if (dirty.empty()) dirty.assign(n, 0);
    dirty[i] = 1;
    for (Index k = table_.begin(i); k < table_.end(i); ++k) dirty[table_.neighbor[k]] = 1;
  }
  if (dirty.empty()) return;
  std::vector<Index> list;
  for (Index i = 0; i < n; ++i)
    if (dirty[i]) list.push_back(i);
  parallel_for(list.size(), threads_, [&](Index q) { refresh_point(list[q]); });
  const double t = time() + cfg_.time.dt;
  for (Index i : list)
    if (crack_time_[i] < 0.0 && damage_[i] > kCrackDamage) crack_time_[i] = t;
}

void Simulation::step() {
  const double dt = cfg_.time.dt;
  const double t1 = (step_ + 1) * dt;
  kin_prev_.capture(fields_);
  std::swap(forces_prev_, forces_);

  newmark_predict(fields_, dt, threads_);
  loads_.apply_kinematics(fields_, t1);
  loads_.external_forces(t1, forces_);
  compute_internal(dt);
  check_finite();
  newmark_correct(fields_, forces_, dt, threads_);
  loads_.apply_kinematics(fields_, t1);
  damage_phase(dt);

  audit_ = energy_audit(ledger_, fields_, kin_prev_, forces_prev_, forces_, cfg_.audit_tolerance);
  if (!audit_.pass) ++audit_failures_;
  ++step_;
}

double Simulation::reaction_force() const {
  if (cfg_.loading.reaction_boundary.empty()) return 0.0;
  return loads_.reaction(forces_, cfg_.loading.reaction_boundary, cfg_.loading.reaction_component);
}

HistoryRow Simulation::history_row() const {
  return {step_, time(), reaction_force(), ledger_.W_int, ledger_.W_ext, ledger_.W_kin, audit_.pass};
}

Mat2 Simulation::point_strain(Index i) const {
  if (tensorial_) return cs_[i].eps;
  ShapeTensor s;
  if (!try_shape_tensor(i, table_, s)) return {};
  return nonlocal_strain(i, table_, s.Kinv, fields_.u, fields_.w);
}

Snapshot Simulation::snapshot() {
  const Index n = fields_.size();
  Snapshot s;
  s.step = step_;
  s.time = time();
  s.resize(n);
  if (!have_ref_) {
    sig_ref_.assign(n, {});
    eps_ref_.assign(n, {});
    m_ref_.assign(n, {});
    kap_ref_.assign(n, {});
  }
  for (Index i = 0; i < n; ++i) {
    const ConstitutiveState& st = cs_[i];
    s.id[i] = i;
    s.X[i] = fields_.X[i];
    s.u[i] = fields_.u[i];
    s.v[i] = fields_.v[i];
    s.omega[i] = fields_.w[i];
    s.eps[i] = point_strain(i);
    s.eq_plastic_shear[i] = equivalent_plastic_shear(st.eps_vp, st.eps_vp_zz);
    s.plastic_volume[i] = st.eps_vp.xx + st.eps_vp.yy + st.eps_vp_zz;
    s.eps_hat[i] = st.eps_hat;
    s.damage[i] = damage_[i];
    const Mat2 sig = tensorial_ ? st.sigma.s : Mat2{};
    const Vec2 kap = tensorial_ ? st.kappa : Vec2{};
    s.second_order_work[i] =
        have_ref_ ? second_order_work(sig - sig_ref_[i], s.eps[i] - eps_ref_[i], st.m - m_ref_[i], kap - kap_ref_[i])
                  : 0.0;
    sig_ref_[i] = sig;
    eps_ref_[i] = s.eps[i];
    m_ref_[i] = st.m;
    kap_ref_[i] = kap;
  }
  have_ref_ = true;
  return s;
}

}  // namespace cppm
