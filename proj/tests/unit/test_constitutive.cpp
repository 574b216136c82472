#include <gtest/gtest.h>

#include <cmath>

#include "cppm/constitutive.hpp"
#include "oracles.hpp"

using namespace cppm;

namespace {

constexpr double kDeg = oracle::kPi / 180.0;

ElasticModuli soil() { return ElasticModuli::from_ratio(50.4e6, 0.4, 2.0, 1e-3); }

ViscoplasticParams dp(double psi_deg = 33.0, double eta = 3000.0) {
  ViscoplasticParams vp;
  vp.c0 = 0.13e6;
  vp.h = -1.5e6;
  vp.phi_f = 42.0 * kDeg;
  vp.psi = psi_deg * kDeg;
  vp.eta = eta;
  return vp;
}

Stress random_stress(oracle::Rng& r, double scale) {
  Stress s;
  s.s = r.mat(-scale, scale);
  s.zz = r.uniform(-scale, scale);
  return s;
}

}  // namespace

TEST(ElasticModuli, PlaneStrainLameConstants) {
  const auto m = ElasticModuli::from(50e6, 0.25, 10e6, 1e-3);
  EXPECT_DOUBLE_EQ(m.mu, 20e6);
  EXPECT_DOUBLE_EQ(m.lambda, 50e6 * 0.25 / (1.25 * 0.5));
  EXPECT_DOUBLE_EQ(m.alpha_m, 2.0 * 20e6 * 1e-6);
  EXPECT_THROW(ElasticModuli::from(-1.0, 0.2, 0.0, 1e-3), ConfigError);
  EXPECT_THROW(ElasticModuli::from(1.0, 0.5, 0.0, 1e-3), ConfigError);
  EXPECT_THROW(ElasticModuli::from(1.0, 0.2, -1.0, 1e-3), ConfigError);
  EXPECT_THROW(ElasticModuli::from(1.0, 0.2, 0.0, 0.0), ConfigError);
}

TEST(ElasticStress, ZeroStrain) {
  const auto s = elastic_stress(Mat2{}, soil());
  EXPECT_EQ(s.s, Mat2{});
  EXPECT_EQ(s.zz, 0.0);
}

TEST(ElasticStress, IsotropicStrain) {
  const auto m = soil();
  const double e0 = 1e-4;
  const auto s = elastic_stress(e0 * Mat2::identity(), m);
  EXPECT_NEAR(s.s.xx, (2 * m.lambda + 2 * m.mu) * e0, 1e-9);
  EXPECT_NEAR(s.s.yy, (2 * m.lambda + 2 * m.mu) * e0, 1e-9);
  EXPECT_EQ(s.s.xy, 0.0);
  EXPECT_EQ(s.s.yx, 0.0);
  EXPECT_NEAR(s.zz, 2 * m.lambda * e0, 1e-9);
}

TEST(ElasticStress, ShearShowsCosseratAsymmetry) {
  const auto m = soil();
  const double g = 2e-4;
  const auto s = elastic_stress(Mat2{0.0, g, 0.0, 0.0}, m);
  EXPECT_NEAR(s.s.xy, (m.mu + m.mu_c) * g, 1e-9);
  EXPECT_NEAR(s.s.yx, (m.mu - m.mu_c) * g, 1e-9);
}

TEST(ElasticStress, MatchesComponentOracle) {
  const auto m = soil();
  oracle::Rng r(3);
  for (int n = 0; n < 50; ++n) {
    const Mat2 e = r.mat(-1e-3, 1e-3);
    const auto s = elastic_stress(e, m);
    const Mat2 ref = oracle::cosserat_stress(e, m.lambda, m.mu, m.mu_c);
    EXPECT_LE(oracle::max_abs(s.s - ref), 1e-9 * oracle::max_abs(ref));
  }
}

TEST(CoupleStress, ScalesWithLengthSquared) {
  const auto m = ElasticModuli::from(50e6, 0.25, 0.0, 1e-3);
  ASSERT_DOUBLE_EQ(m.mu, 20e6);
  const Vec2 c = elastic_couple_stress({1.0, 0.0}, m);
  EXPECT_NEAR(c.x, 40.0, 1e-12);
  EXPECT_EQ(c.y, 0.0);
  EXPECT_EQ(elastic_couple_stress({}, m), Vec2{});
  const auto m2 = ElasticModuli::from(50e6, 0.25, 0.0, 2e-3);
  EXPECT_NEAR(elastic_couple_stress({1.0, 0.0}, m2).x, 160.0, 1e-12);
}

TEST(DruckerPrager, Coefficients) {
  EXPECT_EQ(dp_coefficient(0.0), 0.0);
  EXPECT_NEAR(dp_coefficient(33 * kDeg), 0.2561, 1e-4);
  EXPECT_NEAR(dp_coefficient(30 * kDeg), 0.2309, 1e-4);
  for (double a : {5.0, 20.0, 42.0}) EXPECT_DOUBLE_EQ(dp_coefficient(a * kDeg), oracle::dp_coefficient(a * kDeg));
}

TEST(DruckerPrager, UnstressedStateIsElastic) {
  const auto vp = dp();
  const auto y = yield_and_potential(Stress{}, {}, 0.0, vp, soil());
  const double B = 6.0 * std::cos(vp.phi_f) / (3.0 - std::sin(vp.phi_f));
  EXPECT_NEAR(y.f, -B * vp.c0, 1e-6);
  EXPECT_LT(y.f, 0.0);
}

TEST(DruckerPrager, HydrostaticTensionOnset) {
  const auto vp = dp();
  const double B = 6.0 * std::cos(vp.phi_f) / (3.0 - std::sin(vp.phi_f));
  const double A1 = oracle::dp_coefficient(vp.phi_f);
  const double p_onset = B * vp.c0 / (std::sqrt(3.0) * A1);
  for (double p : {0.5 * p_onset, p_onset, 2.0 * p_onset}) {
    Stress s;
    s.s = p * Mat2::identity();
    s.zz = p;
    const auto y = yield_and_potential(s, {}, 0.0, vp, soil());
    EXPECT_NEAR(y.q, 0.0, 1e-9);
    EXPECT_NEAR(y.f, std::sqrt(3.0) * A1 * p - B * vp.c0, 1e-6 * B * vp.c0);
  }
}

TEST(DruckerPrager, CohesionSoftensToFloor) {
  const auto vp = dp();
  EXPECT_DOUBLE_EQ(cohesion(0.0, vp), vp.c0);
  EXPECT_DOUBLE_EQ(cohesion(0.01, vp), vp.c0 - 1.5e6 * 0.01);
  EXPECT_DOUBLE_EQ(cohesion(10.0, vp), 1e-3 * vp.c0);
}

TEST(DruckerPrager, PotentialGradientMatchesFiniteDifferences) {
  const auto vp = dp();
  const auto mod = soil();
  oracle::Rng r(42);
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    const Stress s = random_stress(r, 1e5);
    const Vec2 m = r.vec(-50.0, 50.0);
    const auto y = yield_and_potential(s, m, 0.0, vp, mod);
    const double hs = 1e-2, hm = 1e-5;
    auto g = [&](const Stress& a, const Vec2& b) { return plastic_potential(a, b, vp, mod); };
    Stress sp = s;
    double* comps[5] = {&sp.s.xx, &sp.s.xy, &sp.s.yx, &sp.s.yy, &sp.zz};
    const double an[5] = {y.dg_dsigma.s.xx, y.dg_dsigma.s.xy, y.dg_dsigma.s.yx, y.dg_dsigma.s.yy,
                          y.dg_dsigma.zz};
    double scale = 0.0;
    for (double a : an) scale = std::max(scale, std::abs(a));
    for (int c = 0; c < 5; ++c) {
      const double keep = *comps[c];
      *comps[c] = keep + hs;
      const double gp = g(sp, m);
      *comps[c] = keep - hs;
      const double gm = g(sp, m);
      *comps[c] = keep;
      worst = std::max(worst, std::abs((gp - gm) / (2 * hs) - an[c]) / scale);
    }
    for (int c = 0; c < 2; ++c) {
      Vec2 mp = m, mm = m;
      (c ? mp.y : mp.x) += hm;
      (c ? mm.y : mm.x) -= hm;
      const double fd = (g(s, mp) - g(s, mm)) / (2 * hm);
      const double a = c ? y.dg_dm.y : y.dg_dm.x;
      worst = std::max(worst, std::abs(fd - a) / std::max(std::abs(a), 1e-3 * scale));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Viscoplastic, BelowYieldIsElastic) {
  const auto vp = dp();
  const auto mod = soil();
  ConstitutiveState st;
  const Mat2 e{-1e-5, 0.0, 0.0, -1e-5};
  ASSERT_TRUE(viscoplastic_update(e, {}, st, vp, mod, 1e-5));
  const auto ref = elastic_stress(e, mod);
  EXPECT_EQ(st.sigma.s, ref.s);
  EXPECT_EQ(st.eps_vp, Mat2{});
  EXPECT_EQ(st.eps_hat, 0.0);
}

TEST(Viscoplastic, InfiniteViscosityIsElastic) {
  auto vp = dp(33.0, 1e300);
  const auto mod = soil();
  ConstitutiveState st;
  const Mat2 e{0.0, 0.05, 0.05, 0.0};
  ASSERT_TRUE(viscoplastic_update(e, {}, st, vp, mod, 1e-5));
  ASSERT_GT(yield_and_potential(elastic_stress(e, mod), {}, 0.0, vp, mod).f, 0.0);
  EXPECT_LE(oracle::max_abs(st.eps_vp), 1e-250);
  EXPECT_LE(oracle::max_abs(st.sigma.s - elastic_stress(e, mod).s), 1e-6);
}

TEST(Viscoplastic, InternalVariableNeverDecreasesAndRelaxesStress) {
  const auto vp = dp();
  const auto mod = soil();
  ConstitutiveState st;
  double last = 0.0;
  for (int n = 1; n <= 400; ++n) {
    const Mat2 e{1e-4 * n * 0.3, 0.0, 0.0, -1e-4 * n};
    ASSERT_TRUE(viscoplastic_update(e, {}, st, vp, mod, 1e-5));
    EXPECT_GE(st.eps_hat, last);
    last = st.eps_hat;
  }
  EXPECT_GT(st.eps_hat, 0.0);
  const auto trial = elastic_stress(Mat2{0.012, 0.0, 0.0, -0.04}, mod);
  EXPECT_LT(yield_and_potential(st.sigma, {}, st.eps_hat, vp, mod).f,
            yield_and_potential(trial, {}, st.eps_hat, vp, mod).f);
}

// Point driver on a confined shear path: the deviatoric
// accumulation of the internal variable against the closed form with the
// volumetric sign factor. The two differ by exactly 1 + sign(p) A3/sqrt(3).
TEST(Viscoplastic, InternalVariableAccumulationAgainstClosedForm) {
  const auto mod = soil();
  for (double psi : {0.0, 10.0, 20.0, 33.0}) {
    auto vp = dp(psi, 1e7);
    vp.h = 0.0;
    ConstitutiveState st;
    double closed = 0.0;
    const double dt = 1e-6;
    for (int n = 1; n <= 2000; ++n) {
      const Mat2 e{-1e-3, 1e-5 * n, 1e-5 * n, -1e-3};
      ConstitutiveState trial = st;
      trial.sigma = st.prestress + elastic_stress(e - st.eps_vp, -st.eps_vp_zz, mod);
      const auto y = yield_and_potential(trial.sigma, {}, st.eps_hat, vp, mod);
      closed += dt * internal_variable_rate_closed_form(y.f, y.p, vp);
      ASSERT_TRUE(viscoplastic_update(e, {}, st, vp, mod, dt));
    }
    ASSERT_GT(st.eps_hat, 0.0) << psi;
    const double factor = 1.0 - oracle::dp_coefficient(psi * kDeg) / std::sqrt(3.0);  // p < 0
    EXPECT_NEAR(closed / st.eps_hat, factor, 1e-6) << psi;
    const double mismatch = std::abs(st.eps_hat - closed) / st.eps_hat;
    if (psi <= 10.0) {
      EXPECT_LE(mismatch, 0.05) << psi;
    }
    RecordProperty("mismatch_psi_" + std::to_string(static_cast<int>(psi)), std::to_string(mismatch));
  }
}

TEST(InternalVariable, DeviatoricRateForRadialFlow) {
  // For symmetric deviatoric flow of magnitude lambda the rate equals lambda.
  const auto vp = dp(0.0);
  const auto mod = soil();
  Stress s;
  s.s = {-3e5, 4e4, 4e4, -1e5};
  s.zz = -1.5e5;
  const auto y = yield_and_potential(s, {}, 0.0, vp, mod);
  const double lam = 2.5e-4;
  EXPECT_NEAR(internal_variable_rate(lam * y.dg_dsigma.s, lam * y.dg_dsigma.zz, {}, mod.l), lam, 1e-15);
}

TEST(InternalVariable, ZeroRates) { EXPECT_EQ(internal_variable_rate(Mat2{}, 0.0, {}, 1e-3), 0.0); }

TEST(EquivalentPlasticShear, PureShear) {
  EXPECT_NEAR(equivalent_plastic_shear(Mat2{0.0, 1e-3, 1e-3, 0.0}, 0.0), std::sqrt(2.0 / 3.0 * 2e-6), 1e-15);
  EXPECT_EQ(equivalent_plastic_shear(1e-3 * Mat2::identity(), 1e-3), 0.0);
}

TEST(Maxwell, StepStrainRelaxesExponentially) {
  const auto mod = soil();
  const double tau = 1e-3, dt = tau / 100;
  ConstitutiveState st;
  const Mat2 e0{1e-4, 0.0, 0.0, 0.0};
  maxwell_update(e0, {1.0, 0.0}, st, tau, mod, dt);
  const double s0 = st.sigma.s.xx, m0 = st.m.x;
  EXPECT_NEAR(s0, (mod.lambda + 2 * mod.mu) * 1e-4, 0.01 * s0);
  for (int n = 0; n < 100; ++n) maxwell_update(e0, {1.0, 0.0}, st, tau, mod, dt);
  EXPECT_NEAR(st.sigma.s.xx / s0, 0.3679, 1e-3);
  EXPECT_NEAR(st.sigma.s.xx / s0, std::exp(-1.0), 1e-12);
  EXPECT_NEAR(st.m.x / m0, std::exp(-1.0), 1e-12);
}

TEST(Maxwell, ConstantRatePlateau) {
  const auto mod = soil();
  const double tau = 1e-3, dt = tau / 50, rate = 2.0;
  ConstitutiveState st;
  for (int n = 1; n <= 2000; ++n) maxwell_update(Mat2{rate * n * dt, 0.0, 0.0, 0.0}, {}, st, tau, mod, dt);
  const double plateau = (mod.lambda + 2 * mod.mu) * tau * rate;
  EXPECT_NEAR(st.sigma.s.xx / plateau, 1.0, 0.01);
}

TEST(Maxwell, InfiniteRelaxationTimeIsElastic) {
  const auto mod = soil();
  ConstitutiveState st;
  const Mat2 e{1e-4, 2e-5, -3e-5, -5e-5};
  for (int n = 1; n <= 10; ++n) maxwell_update(0.1 * n * e, {0.1 * n, 0.0}, st, INFINITY, mod, 1e-3);
  EXPECT_LE(oracle::max_abs(st.sigma.s - elastic_stress(e, mod).s), 1e-9 * oracle::max_abs(elastic_stress(e, mod).s));
  EXPECT_NEAR(st.m.x, mod.alpha_m, 1e-12 * mod.alpha_m);
}

TEST(BondStretch, RatesOfRigidAndAxialMotion) {
  const Vec2 xi{1e-3, 0.0};
  const auto a = bond_stretch({1e-3, 0.0}, 0.0, xi);  // axial relative velocity 1 mm/s
  EXPECT_NEAR(a.s1, 1.0, 1e-12);
  EXPECT_NEAR(a.s2, 0.0, 1e-12);
  const auto t = bond_stretch({}, 0.0, xi);
  EXPECT_EQ(t.s1, 0.0);
  EXPECT_EQ(t.s2, 0.0);
  EXPECT_EQ(t.dw, 0.0);
  // Rigid spin: the transverse relative velocity is cancelled by the
  // mean-rotation term, so the composite vector is zero.
  const double th = 3.0;
  const Vec2 U = perp(th, xi);
  const Vec2 comp = U - perp(th, xi);
  const auto r = bond_stretch(comp, 0.0, xi);
  EXPECT_EQ(r.s2, 0.0);
  EXPECT_EQ(r.s1, 0.0);
  const auto d = bond_stretch(Vec2{0.0, 2e-6}, 0.5, Vec2{0.0, 1e-3});
  EXPECT_NEAR(d.s1, 2e-3, 1e-15);
  EXPECT_NEAR(d.s2, 0.0, 1e-15);
  EXPECT_EQ(d.dw, 0.5);
}

TEST(BondViscoelastic, StepStretchAndElasticLimit) {
  BondViscoParams p{1e-3, 5.0, 2.0, 0.5};
  BondForceMemory mem;
  bond_viscoelastic_update({}, mem, p, 1e-5);
  EXPECT_EQ(mem.t1, 0.0);
  EXPECT_EQ(mem.t2, 0.0);
  EXPECT_EQ(mem.m, 0.0);

  bond_viscoelastic_update({1e-3, 0.0, 0.0}, mem, p, 1e-5);
  const double t10 = mem.t1;
  for (int n = 0; n < 100; ++n) bond_viscoelastic_update({}, mem, p, 1e-5);
  EXPECT_NEAR(mem.t1, t10 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(t10, 5.0 * 1e-3, 0.01 * 5e-3);

  BondViscoParams el{INFINITY, 5.0, 2.0, 0.5};
  BondForceMemory e;
  for (int n = 0; n < 10; ++n) bond_viscoelastic_update({1e-4, -2e-4, 3e-4}, e, el, 1e-5);
  EXPECT_NEAR(e.t1, 5.0 * 1e-3, 1e-15);
  EXPECT_NEAR(e.t2, 2.0 * -2e-3, 1e-15);
  EXPECT_NEAR(e.m, 0.5 * 3e-3, 1e-15);
}

TEST(BondViscoelastic, CalibratedConstantsReproduceModuli) {
  // Interior family of the 2.05 dx stencil: k1 follows from isotropic
  // dilatation energy, km from uniform wryness.
  const auto mod = ElasticModuli::from_ratio(35e9, 0.25, 1.0 / 3.0, 2e-3);
  const double h = 1e-3, V = h * h * 0.01;
  double sum_len_vol = 0.0, kxx = 0.0;
  for (auto [i, j] : oracle::lattice_family(2.05)) {
    sum_len_vol += std::hypot(i * h, j * h) * V;
    kxx += (i * h) * (i * h) * V;
  }
  const auto p = calibrate_bond_constants(mod, 1e-4, sum_len_vol, kxx);
  EXPECT_DOUBLE_EQ(p.k1, 4.0 * (mod.lambda + mod.mu) / sum_len_vol);
  EXPECT_DOUBLE_EQ(p.k2, 4.0 * mod.mu_c / sum_len_vol);
  EXPECT_DOUBLE_EQ(p.km, mod.alpha_m / kxx);
  // Isotropic stretch e: the bond energy sum 1/2 k1 s^2 |xi| V equals the
  // continuum density 2 (lambda + mu) e^2.
  double energy = 0.0;
  const double e = 1e-4;
  for (auto [i, j] : oracle::lattice_family(2.05)) energy += 0.5 * p.k1 * e * e * std::hypot(i * h, j * h) * V;
  EXPECT_NEAR(energy, 2.0 * (mod.lambda + mod.mu) * e * e, 1e-12 * energy);
  EXPECT_THROW(calibrate_bond_constants(mod, 1e-4, 0.0, kxx), ConfigError);
}
