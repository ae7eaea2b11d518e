#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlsm/locality.hpp"
#include "nlsm/random.hpp"

using namespace nlsm;
using std::numbers::pi;

namespace {

SpectralCoeffs at_degree(const BasisPtr& b, int l, std::uint64_t seed) {
  auto rng = make_rng(seed, static_cast<std::uint64_t>(l));
  return random_field(b, rng, [l](const Mode& m) { return m.label.a == l ? 1.0 : 0.0; });
}

}  // namespace

TEST(Profile, TorusCharactersSpike) {
  auto b = build_basis(Manifold::kTorus, 10.0, 1.0);
  SpectralCoeffs f(b), g(b);
  f.set({3, 4}, 1.0);   // |xi| = 5
  g.set({-1, 2}, 1.0);  // |xi| = sqrt 5
  const double nf = 5.0, ng = std::sqrt(5.0);
  const double want = std::sqrt(2.0 * 2.0 + 6.0 * 6.0);  // |(2, 6)|
  std::vector<double> targets;
  for (int nu = 0; nu <= 9; ++nu) targets.push_back(nu);
  auto p = product_localization_profile(f, g, nf, ng, targets);
  for (const auto& e : p.entries) {
    if (want >= e.nu && want < e.nu + 1.0)
      EXPECT_NEAR(e.norm, 1.0 / (2.0 * pi), 1e-13);  // |e_xi e_eta| = 1/(2 pi) pointwise
    else
      EXPECT_LE(e.norm, 1e-13) << e.nu;
  }
  EXPECT_NEAR(p.prefactor, std::sqrt(ng), 1e-15);
}

TEST(Profile, SphereTriangleRuleAndParseval) {
  auto b = build_basis(Manifold::kSphere, 41.0, 1.0);
  auto f = at_degree(b, 40, 1);
  auto g = at_degree(b, 4, 2);
  std::vector<double> targets;
  for (int nu = 30; nu <= 60; ++nu) targets.push_back(nu);
  auto p = product_localization_profile(f, g, 40.0, 4.0, targets);
  for (const auto& e : p.entries) {
    if (e.nu > 44.0) EXPECT_LE(e.norm, 1e-10) << e.nu;
    if (e.nu < 36.0) EXPECT_LE(e.norm, 1e-10) << e.nu;
    const int l = static_cast<int>(e.nu);
    if (l >= 36 && l <= 44 && l % 2 == 0) EXPECT_GT(e.norm, 1e-6) << e.nu;
    if (l >= 36 && l <= 44 && l % 2 == 1) EXPECT_LE(e.norm, 1e-10) << e.nu;  // parity
  }
  EXPECT_NEAR(p.cluster_sum, p.product_norm, 1e-10 * p.product_norm);
  EXPECT_NEAR(p.entries[10].K, (40.0 - 40.0 - 2.0) / 4.0, 1e-15);  // nu = 40 on the upper branch
  EXPECT_NEAR(p.entries[6].K, (40.0 - 36.0 - 2.0) / 4.0, 1e-15);   // nu = 36 on the lower branch
}

TEST(Profile, EmptyClusterReported) {
  auto b = build_basis(Manifold::kTorus, 6.0, 1.0);
  SpectralCoeffs f(b), g(b);
  g.set({1, 0}, 1.0);
  auto p = product_localization_profile(f, g, 2.2, 1.0, {2.0, 3.0});
  EXPECT_TRUE(p.empty_cluster);
  for (const auto& e : p.entries) EXPECT_EQ(e.norm, 0.0);
}

TEST(Profile, RejectsUnlocalizedInput) {
  auto b = build_basis(Manifold::kTorus, 6.0, 1.0);
  SpectralCoeffs f(b), g(b);
  f.set({5, 0}, 1.0);
  g.set({1, 0}, 1.0);
  EXPECT_THROW(product_localization_profile(f, g, 2.0, 1.0, {1.0}), std::invalid_argument);
}

TEST(Crude, TorusOffResonanceIsZero) {
  auto b = build_basis(Manifold::kTorus, 12.0, 1.0);
  SpectralCoeffs e1(b), e2(b), e3(b), e4(b);
  e1.set({11, 0}, 1.0);
  e2.set({0, 2}, 1.0);
  e3.set({-2, 0}, 1.0);
  e4.set({1, 1}, 1.0);
  auto v = crude_localization_check(e1, e2, e3, e4, 2.0);
  EXPECT_TRUE(v.sharp_rule_applies);
  EXPECT_TRUE(v.threshold_rule_applies);
  EXPECT_LE(std::abs(v.integral), 1e-13);
  EXPECT_TRUE(v.consistent);
}

TEST(Crude, TorusResonantControl) {
  auto b = build_basis(Manifold::kTorus, 6.0, 1.0);
  SpectralCoeffs e1(b), e2(b), e3(b), e4(b);
  e1.set({-3, -1}, 2.0 * pi);
  e2.set({1, 2}, 2.0 * pi);
  e3.set({2, 0}, 2.0 * pi);
  e4.set({0, -1}, 2.0 * pi);
  auto v = crude_localization_check(e1, e2, e3, e4, 2.0);
  EXPECT_NEAR(std::abs(v.integral - cplx{4.0 * pi * pi, 0.0}), 0.0, 1e-11);
  EXPECT_FALSE(v.sharp_rule_applies);
  EXPECT_FALSE(v.vanishes);
}

TEST(Crude, SphereDegreesBeyondSum) {
  auto b = build_basis(Manifold::kSphere, 20.0, 1.0);
  auto e1 = at_degree(b, 17, 3);
  auto e2 = at_degree(b, 5, 4);
  auto e3 = at_degree(b, 4, 5);
  auto e4 = at_degree(b, 3, 6);
  auto v = crude_localization_check(e1, e2, e3, e4, 1.0);
  EXPECT_TRUE(v.sharp_rule_applies);
  EXPECT_LE(std::abs(v.integral), 1e-10);
  EXPECT_TRUE(v.consistent);
}

TEST(An, ContractionCoefficients) {
  auto t1 = bn_terms(1);
  ASSERT_EQ(t1.size(), 3u);
  for (const auto& t : t1) EXPECT_EQ(t.coefficient, 1);
  const std::map<std::string, long> want{{"{23,23}", 1}, {"{23,24}", 2}, {"{23,34}", 2},
                                         {"{24,24}", 1}, {"{24,34}", 2}, {"{34,34}", 1}};
  EXPECT_EQ(b2_coefficient_set(), want);
  long total = 0;
  for (const auto& t : bn_terms(4)) total += t.coefficient;
  EXPECT_EQ(total, 81);
}

TEST(An, FirstOrderClosedForm) {
  const std::array<int, 2> x2{1, 2}, x3{-3, 1}, x4{2, 2};
  auto r = an_identity_check(x2, x3, x4, 1);
  const double s = (1 * -3 + 2 * 1) + (1 * 2 + 2 * 2) + (-3 * 2 + 1 * 2);
  EXPECT_NEAR(std::abs(r[0].An_symbolic - cplx{-4.0 * pi * pi * s, 0.0}), 0.0, 1e-10);
  EXPECT_NEAR(r[0].denominator, 2.0 * s, 1e-12);
  EXPECT_LE(r[0].rel_error_symbolic, 1e-14);
  EXPECT_LE(r[0].rel_error_quadrature, 1e-10);
}

TEST(An, RandomResonantQuadruples) {
  auto rng = make_rng(17);
  std::uniform_int_distribution<int> d(-6, 6);
  int done = 0;
  while (done < 20) {
    std::array<int, 2> x2{d(rng), d(rng)}, x3{d(rng), d(rng)}, x4{d(rng), d(rng)};
    auto r = an_identity_check(x2, x3, x4, 2);
    if (r[0].skipped) continue;
    for (const auto& e : r) {
      EXPECT_LE(e.rel_error_symbolic, 1e-12);
      EXPECT_LE(e.rel_error_quadrature, 1e-10);
    }
    ++done;
  }
}

TEST(An, NonResonantIsZero) {
  const std::array<int, 2> x1{4, 0}, x2{1, 2}, x3{-3, 1}, x4{2, 2};
  auto r = an_identity_check(x2, x3, x4, 2, &x1);
  for (const auto& e : r) {
    EXPECT_FALSE(e.resonant);
    EXPECT_EQ(e.A0, cplx{});
    EXPECT_LE(std::abs(e.An_quadrature), 1e-10);
  }
}

TEST(An, SmallDenominatorSkipped) {
  auto r = an_identity_check({1, 0}, {0, 1}, {0, 0}, 2);
  for (const auto& e : r) EXPECT_TRUE(e.skipped);
}

TEST(DecayTable, ExactZeroBeyondTriangle) {
  auto rows = cluster_decay_table(40, 4, {0.5, 1.0, 2.0, 4.0}, 11);
  bool upper_bulk = false, lower_bulk = false;
  for (const auto& r : rows) {
    if (r.K >= 1.0) EXPECT_LE(r.norm, 1e-10) << r.nu << " " << r.branch;
    if (r.K < 1.0 && r.branch == "upper") upper_bulk = r.norm > 1e-6;
    if (r.K < 1.0 && r.branch == "lower") lower_bulk = r.norm > 1e-6;
    EXPECT_EQ(r.prefactor, 2.0);
  }
  EXPECT_TRUE(upper_bulk);
  EXPECT_TRUE(lower_bulk);
  EXPECT_THROW(cluster_decay_table(40, 4, {1000.0}, 1), RefusalError);
}
