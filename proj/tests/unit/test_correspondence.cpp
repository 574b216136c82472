#include <gtest/gtest.h>

#include <cmath>

#include "cppm/correspondence.hpp"
#include "oracles.hpp"
#include "pipeline.hpp"

using namespace cppm;

namespace {

PointField grid(long nx, long ny, double h, double t = 1.0) {
  return build_grid({nx, ny, h, t, {}}, {DensityKind::partial, 1000.0, 1.0, 0.0, 1e-3});
}

pipeline::Model model(double h, bool elastic, double G1, double G2) {
  pipeline::Model m;
  if (elastic) m.mod = ElasticModuli::from_ratio(50.4e6, 0.4, 2.0, 1e-3);
  m.stab = {G1, G2};
  m.delta = 2.05 * h;
  m.abs_D = std::abs(micro_modulus(50.4e6, 0.4, m.delta));
  return m;
}

bool deep_interior(long nx, long ny, long margin, Index i) {
  const long c = static_cast<long>(i) % nx, r = static_cast<long>(i) / nx;
  return c >= margin && r >= margin && c < nx - margin && r < ny - margin;
}

// Total potential: elastic strain energy plus the stabilization energy.
double potential(const PointField& f, const NeighborTable& t, const pipeline::Model& md) {
  const auto s = pipeline::evaluate(f, t, md);
  double e = pipeline::stabilization_energy(f, t, s);
  for (Index i = 0; i < f.size(); ++i) e += 0.5 * f.V[i] * (ddot(s.sigma[i], s.eps[i]) + dot(s.m[i], s.kappa[i]));
  return e;
}

}  // namespace

TEST(MicroModulus, SignAndValues) {
  EXPECT_EQ(micro_modulus(35e9, 0.25, 1e-3), 0.0);
  const double delta = 2.05 * 1.43e-3;
  const double D = micro_modulus(50.4e6, 0.4, delta);
  EXPECT_NEAR(D, oracle::micro_modulus(50.4e6, 0.4, delta), 1e-12 * std::abs(D));
  EXPECT_NEAR(D, -1.0e12, 0.01e12);
  EXPECT_GT(micro_modulus(1e9, 0.2, 1e-3), 0.0);
}

TEST(Stabilization, ZeroGainsGiveZeroConstants) {
  const auto c = stabilization_constants({0.0, 0.0}, 1e12, 1e-3, 1.0, 1.0);
  EXPECT_EQ(c.alpha, 0.0);
  EXPECT_EQ(c.beta, 0.0);
}

TEST(Stabilization, ConstantsScaleWithBondLength) {
  const auto a = stabilization_constants({0.0175, 0.0017}, 1e12, 1e-3, 1.0, 1.0);
  EXPECT_NEAR(a.alpha, 0.0175 * 12e12 / 1e-9, 1e-6 * a.alpha);
  EXPECT_NEAR(a.beta, 0.0017 * 1e12 / 1e-3, 1e-6 * a.beta);
  const auto b = stabilization_constants({0.0175, 0.0017}, 1e12, 2e-3, 0.5, 0.5);
  EXPECT_NEAR(b.alpha / a.alpha, 1.0 / 8.0, 1e-12);
  EXPECT_NEAR(b.beta / a.beta, 0.5, 1e-12);
}

TEST(Stabilization, NormalizedWeightedVolumeOfFullFamily) {
  // A large horizon approaches pi delta^2 t.
  const double h = 1e-3;
  const auto f = grid(81, 81, h, 0.1);
  const auto t = find_neighbors(f, 30.0 * h);
  const Index c = 40 * 81 + 40;
  double wv = 0.0;
  for (Index k = t.begin(c); k < t.end(c); ++k) wv += t.omega[k] * t.vol[k];
  EXPECT_NEAR(normalized_weighted_volume(wv, 30.0 * h, 0.1), 1.0, 0.01);
}

TEST(ForceState, UniaxialStressOnTheFourNeighbourStencil) {
  const double h = 1e-3, p = 3e5;
  const auto f = grid(3, 3, h);
  const auto t = find_neighbors(f, 1.01 * h);
  const auto K = shape_tensor(4, t);
  const Vec2 T = force_state(Mat2{p, 0.0, 0.0, 0.0}, K.Kinv, 1.0, {h, 0.0}, 0.0, {});
  const double V = h * h;
  EXPECT_NEAR(T.x, p / (2 * V * h), 1e-9 * p / (V * h));
  EXPECT_EQ(T.y, 0.0);
  const Vec2 Ts = force_state(Mat2{}, K.Kinv, 1.0, {h, 0.0}, 7.0, {1.0, -2.0});
  EXPECT_EQ(Ts, (Vec2{7.0, -14.0}));
}

TEST(MomentState, UniformCoupleStress) {
  const double h = 1e-3, m0 = 5.0;
  const auto f = grid(3, 3, h);
  const auto t = find_neighbors(f, 1.01 * h);
  const auto K = shape_tensor(4, t);
  const double M = moment_state({m0, 0.0}, K.Kinv, 1.0, {h, 0.0}, 0.0, 0.0);
  EXPECT_NEAR(M, m0 * h / K.K.xx, 1e-12 * std::abs(M));
  EXPECT_EQ(moment_state({}, K.Kinv, 1.0, {h, 0.0}, 3.0, 2.0), 6.0);
}

TEST(BondLoad, ActionReactionAndCouple) {
  const Vec2 Tij{2.0, 1.0}, Tji{-1.0, 0.5};
  const Vec2 Y{1e-3, 0.0};
  const auto a = bond_load(Tij, Tji, 0.3, -0.1, Y, 2.0, 3.0);
  const auto b = bond_load(Tji, Tij, -0.1, 0.3, -1.0 * Y, 3.0, 2.0);
  EXPECT_EQ(a.force, -1.0 * b.force);
  // Net torque of the pair about the origin with i at 0 and j at Y.
  EXPECT_NEAR(a.torque + b.torque + cross(Y, b.force), 0.0, 1e-15);
}

// Bond power summed over a family equals the stress power of the point plus
// the rate of the stabilization energy.
TEST(Correspondence, EnergyConsistency) {
  const double h = 1e-3;
  auto f = grid(8, 8, h);
  const auto t = find_neighbors(f, 2.05 * h);
  oracle::Rng rng(5);
  for (const bool stab : {false, true}) {
    const auto md = model(h, true, stab ? 0.0175 : 0.0, stab ? 0.0017 : 0.0);
    for (Index i = 0; i < f.size(); ++i) f.w[i] = rng.uniform(-1e-3, 1e-3);
    std::vector<Vec2> v(f.size());
    std::vector<double> wd(f.size());
    for (Index i = 0; i < f.size(); ++i) {
      v[i] = rng.vec(-1.0, 1.0);
      wd[i] = rng.uniform(-1e3, 1e3);
    }
    const auto s = pipeline::evaluate(f, t, md);
    double global = 0.0;
    for (Index i = 0; i < f.size(); ++i) {
      const auto K = shape_tensor(i, t);
      const Mat2 de = nonlocal_strain(i, t, K.Kinv, v, wd);
      const Vec2 dk = nonlocal_wryness(i, t, K.Kinv, wd);
      double bond = 0.0, resid = 0.0;
      for (Index k = t.begin(i); k < t.end(i); ++k) {
        const auto b = bond_states(i, k, t, v, wd);
        bond += t.vol[k] * (dot(s.T[k], b.Ucomp) + s.M[k] * b.Omega);
        const auto r = residual_states(b, t.xi[k], de, dk);
        resid += t.vol[k] * (s.alpha[k] * dot(s.R1[k], r.R1) + s.beta[k] * s.R2[k] * r.R2);
      }
      const double stress = ddot(s.sigma[i], de) + dot(s.m[i], dk);
      EXPECT_NEAR(bond, stress + resid, 1e-10 * (std::abs(stress) + std::abs(resid)));
      if (!stab) {
        EXPECT_EQ(resid, 0.0);
      }
      global += f.V[i] * bond;
    }
    const auto F = pipeline::forces(f, t, s);
    double nodal = 0.0;
    for (Index i = 0; i < f.size(); ++i) nodal -= dot(F.F_int[i], v[i]) + F.M_int[i] * wd[i];
    EXPECT_NEAR(nodal, global, 1e-10 * std::abs(global));
  }
}

TEST(Correspondence, UniformSymmetricStressIsInEquilibrium) {
  const double h = 1e-3;
  const auto f = grid(11, 11, h);
  const auto t = find_neighbors(f, 2.05 * h);
  std::vector<Vec2> T(t.bonds());
  std::vector<double> M(t.bonds());
  const Mat2 sigma{2e5, 7e4, 7e4, -1e5};
  const Mat2 skew{0.0, 3e4, -3e4, 0.0};
  const Vec2 m{4.0, -2.0};
  for (const Mat2& sg : {sigma, sigma + skew}) {
    for (Index i = 0; i < f.size(); ++i) {
      const auto K = shape_tensor(i, t);
      for (Index k = t.begin(i); k < t.end(i); ++k) {
        T[k] = force_state(sg, K.Kinv, 1.0, t.xi[k], 0.0, {});
        M[k] = moment_state(m, K.Kinv, 1.0, t.xi[k], 0.0, 0.0);
      }
    }
    StepForces out;
    out.resize(f.size());
    assemble(t, f, T, M, out);
    for (Index i = 0; i < f.size(); ++i) {
      if (!deep_interior(11, 11, 4, i)) continue;
      const double scale = f.V[i] * 2e5 / h;
      EXPECT_LE(norm(out.F_int[i]), 1e-10 * scale);
      EXPECT_NEAR(out.M_int[i], f.V[i] * (sg.yx - sg.xy), 1e-10 * f.V[i] * 2e5);
    }
  }
}

TEST(Correspondence, AffinePatchTest) {
  const double h = 1e-3;
  auto f = grid(15, 15, h);
  const auto t = find_neighbors(f, 2.05 * h);
  const auto md = model(h, true, 0.0175, 0.0017);
  const Mat2 A{1e-5, 3e-6, 3e-6, -4e-6};
  for (Index i = 0; i < f.size(); ++i) f.u[i] = A * f.X[i];
  const auto s = pipeline::evaluate(f, t, md);
  const auto F = pipeline::forces(f, t, s);
  const double scale = f.V[0] * oracle::max_abs(s.sigma[7 * 15 + 7]) / h;
  ASSERT_GT(scale, 0.0);
  for (Index i = 0; i < f.size(); ++i) {
    if (!deep_interior(15, 15, 4, i)) continue;
    EXPECT_LE(norm(F.F_int[i]), 1e-9 * scale) << i;
  }
}

TEST(Correspondence, RigidMotionProducesNoForces) {
  const double h = 1e-3;
  auto f = grid(9, 7, h);
  const auto t = find_neighbors(f, 2.05 * h);
  const auto md = model(h, true, 0.0175, 0.0017);
  const double th = 2e-3;
  for (Index i = 0; i < f.size(); ++i) {
    f.u[i] = Vec2{3e-4, -1e-4} + perp(th, f.X[i]);
    f.w[i] = th;
  }
  const auto s = pipeline::evaluate(f, t, md);
  const auto F = pipeline::forces(f, t, s);
  for (Index i = 0; i < f.size(); ++i) {
    EXPECT_LE(oracle::max_abs(s.eps[i]), 1e-16);
    EXPECT_LE(norm(F.F_int[i]), 1e-9);
    EXPECT_LE(std::abs(F.M_int[i]), 1e-12);
  }
}

// Forces and torques are minus the gradient of the stored energy, so the
// tangent stiffness is symmetric.
TEST(Correspondence, ForcesAreTheGradientOfTheStoredEnergy) {
  const double h = 1e-3;
  auto f = grid(7, 6, h);
  const auto t = find_neighbors(f, 2.05 * h);
  oracle::Rng rng(9);
  for (const bool elastic : {false, true}) {
    const auto md = model(h, elastic, 0.0175, 0.0017);
    for (Index i = 0; i < f.size(); ++i) {
      f.u[i] = rng.vec(-1e-12, 1e-12);
      f.w[i] = rng.uniform(-1e-3, 1e-3);
    }
    const auto F = pipeline::forces(f, t, pipeline::evaluate(f, t, md));
    double fscale = 0.0, mscale = 0.0;
    for (Index i = 0; i < f.size(); ++i) {
      fscale = std::max(fscale, norm(F.F_int[i]));
      mscale = std::max(mscale, std::abs(F.M_int[i]));
    }
    const double du = 1e-6 * h, dw = 1e-6;
    for (Index i : {Index{0}, Index{9}, Index{17}, Index{41}}) {
      for (int c = 0; c < 3; ++c) {
        auto fp = f, fm = f;
        if (c == 0) fp.u[i].x += du, fm.u[i].x -= du;
        if (c == 1) fp.u[i].y += du, fm.u[i].y -= du;
        if (c == 2) fp.w[i] += dw, fm.w[i] -= dw;
        const double step = c == 2 ? dw : du;
        const double g = -(potential(fp, t, md) - potential(fm, t, md)) / (2 * step);
        const double a = c == 0 ? F.F_int[i].x : c == 1 ? F.F_int[i].y : F.M_int[i];
        EXPECT_NEAR(g, a, 1e-6 * (c == 2 ? mscale : fscale)) << elastic << " " << i << " " << c;
      }
    }
  }
}

TEST(Assemble, MatchesScatterReferenceAndIsThreadIndependent) {
  const double h = 1e-3;
  auto f = grid(20, 17, h);
  const auto t = find_neighbors(f, 3.05 * h);
  oracle::Rng rng(13);
  for (Index i = 0; i < f.size(); ++i) f.u[i] = rng.vec(-1e-5, 1e-5);
  std::vector<Vec2> T(t.bonds());
  std::vector<double> M(t.bonds());
  for (Index k = 0; k < t.bonds(); ++k) {
    T[k] = rng.vec(-1e10, 1e10);
    M[k] = rng.uniform(-1e6, 1e6);
  }
  StepForces a, b, c;
  a.resize(f.size());
  b.resize(f.size());
  c.resize(f.size());
  assemble(t, f, T, M, a, 1);
  assemble(t, f, T, M, b, 4);
  assemble_reference(t, f, T, M, c);
  double fs = 0.0, ms = 0.0;
  for (Index i = 0; i < f.size(); ++i) fs = std::max(fs, norm(c.F_int[i])), ms = std::max(ms, std::abs(c.M_int[i]));
  for (Index i = 0; i < f.size(); ++i) {
    EXPECT_EQ(a.F_int[i], b.F_int[i]);
    EXPECT_EQ(a.M_int[i], b.M_int[i]);
    EXPECT_LE(norm(a.F_int[i] - c.F_int[i]), 1e-12 * fs);
    EXPECT_NEAR(a.M_int[i], c.M_int[i], 1e-12 * ms);
  }
}

TEST(Assemble, InternalForcesCarryNoNetMomentum) {
  const double h = 1e-3;
  auto f = grid(12, 10, h);
  const auto t = find_neighbors(f, 2.05 * h);
  oracle::Rng rng(21);
  for (Index i = 0; i < f.size(); ++i) {
    f.u[i] = rng.vec(-1e-5, 1e-5);
    f.w[i] = rng.uniform(-1e-2, 1e-2);
  }
  const auto s = pipeline::evaluate(f, t, model(h, true, 0.0175, 0.0017));
  const auto F = pipeline::forces(f, t, s);
  Vec2 P{};
  double L = 0.0, fs = 0.0, ls = 0.0;
  for (Index i = 0; i < f.size(); ++i) {
    P += F.F_int[i];
    const Vec2 x = f.X[i] + f.u[i];
    L += F.M_int[i] + cross(x, F.F_int[i]);
    fs += norm(F.F_int[i]);
    ls += std::abs(F.M_int[i]) + norm(x) * norm(F.F_int[i]);
  }
  EXPECT_LE(norm(P), 1e-12 * fs);
  EXPECT_LE(std::abs(L), 1e-12 * ls);
}
