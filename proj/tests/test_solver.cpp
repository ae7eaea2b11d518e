#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlsm/random.hpp"
#include "nlsm/solver.hpp"

using namespace nlsm;
using std::numbers::pi;

namespace {

double l2_diff(const SpectralCoeffs& a, const SpectralCoeffs& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

SpectralCoeffs smooth_data(Manifold man, double cutoff, double width, double mass, std::uint64_t seed) {
  auto b = build_basis(man, cutoff, 1.0);
  auto rng = make_rng(seed);
  return random_smooth(b, cutoff, width, rng, std::sqrt(mass));
}

}  // namespace

TEST(Linear, IdentityAndMass) {
  auto c = smooth_data(Manifold::kSphere, 8.0, 3.0, 1.0, 1);
  auto same = linear_propagate(c, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(same[k], c[k]);
  auto later = linear_propagate(c, 3.7);
  EXPECT_NEAR(later.norm_squared(), c.norm_squared(), 1e-15);
}

TEST(Linear, ProductPhase) {
  auto b = build_basis(Manifold::kTorus, 5.0, 1.0);
  SpectralCoeffs u(b), v(b);
  u.set({1, 2}, 1.0);
  v.set({-3, 1}, 1.0);
  const double t = 0.37;
  const cplx pu = linear_propagate(u, t).at({1, 2});
  const cplx pv = linear_propagate(v, t).at({-3, 1});
  EXPECT_NEAR(std::abs(pu * pv - std::polar(1.0, -t * (5.0 + 10.0))), 0.0, 1e-15);
}

TEST(Evolve, ZeroData) {
  auto b = build_basis(Manifold::kTorus, 6.0, 1.0);
  EvolveConfig cfg;
  cfg.dt = 0.01;
  cfg.T = 0.1;
  for (auto sch : {Scheme::kSplitStepStrang, Scheme::kReferenceRK4}) {
    cfg.scheme = sch;
    auto tr = evolve(SpectralCoeffs(b), cfg);
    EXPECT_EQ(tr.final_state().norm(), 0.0);
    EXPECT_EQ(tr.times.size(), 11u);
  }
}

TEST(Evolve, SingleModeExactSolution) {
  auto b = build_basis(Manifold::kTorus, 4.0, 1.0);
  const cplx a{0.8, 0.3};
  SpectralCoeffs c(b);
  c.set({2, 1}, a * 2.0 * pi);  // a e^{i xi.x}
  EvolveConfig cfg;
  cfg.T = 0.5;
  cfg.diagnostics = false;
  std::vector<double> errs;
  for (double dt : {0.01, 0.005}) {
    cfg.dt = dt;
    auto tr = evolve(c, cfg);
    // |u| = |a| is constant, so the nonlinear rotation is exact
    const cplx want = a * 2.0 * pi * std::polar(1.0, -(5.0 + std::norm(a)) * cfg.T);
    errs.push_back(std::abs(tr.final_state().at({2, 1}) - want));
    EXPECT_NEAR(tr.final_state().norm_squared(), c.norm_squared(), 1e-12);
  }
  EXPECT_LE(errs[0], 1e-12);
  EXPECT_LE(errs[1], 1e-12);
}

TEST(Evolve, RK4SingleMode) {
  auto b = build_basis(Manifold::kTorus, 3.0, 1.0);
  const cplx a{0.5, -0.4};
  SpectralCoeffs c(b);
  c.set({1, -1}, a * 2.0 * pi);
  EvolveConfig cfg;
  cfg.scheme = Scheme::kReferenceRK4;
  cfg.T = 0.2;
  cfg.dt = 1e-3;
  auto tr = evolve(c, cfg);
  const cplx want = a * 2.0 * pi * std::polar(1.0, -(2.0 + std::norm(a)) * cfg.T);
  EXPECT_LE(std::abs(tr.final_state().at({1, -1}) - want), 1e-10);
}

TEST(Evolve, SplitVsRK4) {
  auto c = smooth_data(Manifold::kTorus, 10.0, 3.0, 1.0, 5);
  EvolveConfig cfg;
  cfg.T = 0.05;
  cfg.dt = 1e-4;
  cfg.diagnostics = false;
  cfg.record_every = 1000;
  auto a = evolve(c, cfg);
  cfg.scheme = Scheme::kReferenceRK4;
  auto r = evolve(c, cfg);
  EXPECT_LE(l2_diff(a.final_state(), r.final_state()), 1e-6);
}

TEST(Evolve, SphereMassAndReversibility) {
  auto c = smooth_data(Manifold::kSphere, 12.0, 2.0, 1.0, 9);
  EvolveConfig cfg;
  cfg.T = 0.05;
  cfg.dt = 1e-3;
  cfg.diagnostics = false;
  auto fwd = evolve(c, cfg);
  EXPECT_NEAR(fwd.final_state().norm_squared(), c.norm_squared(), 1e-11);
  cfg.T = -0.05;
  auto back = evolve(fwd.final_state(), cfg);
  EXPECT_LE(l2_diff(back.final_state(), c), 1e-8);
}

TEST(Evolve, InvalidConfigs) {
  auto c = smooth_data(Manifold::kTorus, 6.0, 2.0, 1.0, 1);
  EvolveConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(evolve(c, cfg), std::invalid_argument);
  cfg.dt = 2.0;
  cfg.T = 1.0;
  EXPECT_THROW(evolve(c, cfg), std::invalid_argument);
  cfg.dt = 0.1;
  cfg.scheme = Scheme::kReferenceRK4;
  EXPECT_THROW(evolve(c, cfg), RefusalError);
}

TEST(Evolve, InstabilityGuard) {
  // RK4 beyond its stability region with the check relaxed blows up
  auto c = smooth_data(Manifold::kTorus, 8.0, 6.0, 1.0, 2);
  EvolveConfig cfg;
  cfg.scheme = Scheme::kReferenceRK4;
  cfg.stability_c = 100.0;
  cfg.dt = 0.1;
  cfg.T = 10.0;
  cfg.diagnostics = false;
  EXPECT_THROW(evolve(c, cfg), InstabilityError);
}

TEST(Evolve, RecordStride) {
  auto c = smooth_data(Manifold::kTorus, 5.0, 2.0, 1.0, 3);
  EvolveConfig cfg;
  cfg.dt = 0.01;
  cfg.T = 0.105;  // 11 uniform steps of 0.00954...
  cfg.record_every = 4;
  auto tr = evolve(c, cfg);
  ASSERT_EQ(tr.times.size(), 4u);  // 0, 4, 8, 11
  EXPECT_DOUBLE_EQ(tr.times.back(), 0.105);
  for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_GT(tr.times[i], tr.times[i - 1]);
  EXPECT_EQ(tr.reports.size(), tr.states.size());
}

TEST(ModifiedEnergy, IdentityMultiplierTracksHamiltonian) {
  auto c = smooth_data(Manifold::kTorus, 8.0, 2.5, 2.0, 4);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.T = 0.05;
  auto tr = evolve(c, cfg);
  IMultiplier big(100.0, 0.7);
  auto series = modified_energy_series(tr, big);
  for (std::size_t i = 0; i < series.values.size(); ++i)
    EXPECT_NEAR(series.values[i], tr.reports[i].modified_energy, 1e-12 * series.values[i]);
  EXPECT_LE(series.increment, 1e-5 * series.values.front());
}

TEST(ModifiedEnergy, LinearFlowKineticConstant) {
  auto c = smooth_data(Manifold::kSphere, 12.0, 6.0, 1.0, 6);
  EvolveConfig cfg;
  cfg.dt = 1e-2;
  cfg.T = 0.3;
  cfg.nonlinear = false;
  cfg.mult = IMultiplier(3.0, 0.7);
  auto tr = evolve(c, cfg);
  for (const auto& r : tr.reports) EXPECT_NEAR(r.kinetic, tr.reports.front().kinetic, 1e-13 * r.kinetic);
}

TEST(Evolve, ScalingCovariance) {
  auto U0 = smooth_data(Manifold::kTorus, 8.0, 3.0, 1.0, 12);
  const double lam = 2.0, t = 0.05;
  EvolveConfig cfg;
  cfg.diagnostics = false;
  cfg.T = t;
  cfg.dt = 1e-3;
  auto small = evolve(rescale_data(U0, lam), cfg);
  cfg.T = t / (lam * lam);
  cfg.dt = 1e-3 / (lam * lam);
  auto base = evolve(U0, cfg);
  auto mapped = rescale_data(base.final_state(), lam);
  EXPECT_LE(l2_diff(mapped, small.final_state()), 1e-12);
}
