#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlsm/random.hpp"
#include "nlsm/spectra.hpp"
#include "nlsm/transform.hpp"

using namespace nlsm;

TEST(Basis, TorusSmallCutoff) {
  auto b = build_basis(Manifold::kTorus, 1.5, 1.0);
  ASSERT_EQ(b->size(), 9u);
  EXPECT_DOUBLE_EQ((*b)[0].frequency, 0.0);
  EXPECT_DOUBLE_EQ((*b)[1].frequency, 1.0);
  EXPECT_DOUBLE_EQ((*b)[8].frequency, std::sqrt(2.0));
}

TEST(Basis, SphereSmallCutoff) {
  auto b = build_basis(Manifold::kSphere, 2.5, 1.0);
  ASSERT_EQ(b->size(), 9u);
  EXPECT_EQ((*b)[8].label.a, 2);
  EXPECT_EQ((*b)[8].base_eigenvalue, 6);
}

TEST(Basis, RescaledEigenvalues) {
  auto b = build_basis(Manifold::kTorus, 2.0, 2.0);
  auto i = b->find({4, 0});
  ASSERT_GE(i, 0);
  EXPECT_DOUBLE_EQ((*b)[static_cast<std::size_t>(i)].eigenvalue, 4.0);
  for (const auto& m : b->modes())
    EXPECT_NEAR(m.eigenvalue * 4.0, static_cast<double>(m.base_eigenvalue), 1e-14 * (1.0 + m.base_eigenvalue));
  EXPECT_DOUBLE_EQ(b->volume(), 4.0 * 4.0 * std::numbers::pi * std::numbers::pi);
}

TEST(Basis, DeterministicOrderAndLabelsUnique) {
  auto a = build_basis(Manifold::kTorus, 7.3, 1.7);
  auto b = build_basis(Manifold::kTorus, 7.3, 1.7);
  ASSERT_EQ(a->size(), b->size());
  EXPECT_EQ(a->content_hash(), b->content_hash());
  for (std::size_t k = 0; k < a->size(); ++k) {
    EXPECT_EQ((*a)[k].label, (*b)[k].label);
    if (k > 0) {
      const auto& p = (*a)[k - 1];
      const auto& q = (*a)[k];
      EXPECT_TRUE(p.base_eigenvalue < q.base_eigenvalue || (p.base_eigenvalue == q.base_eigenvalue && p.label < q.label));
    }
  }
}

TEST(Basis, ModeCapRefusal) {
  EXPECT_THROW(build_basis(Manifold::kTorus, 100.0, 1.0, 1000), RefusalError);
  EXPECT_THROW(build_basis(Manifold::kTorus, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(build_basis(Manifold::kSphere, 2.0, 0.0), std::invalid_argument);
}

TEST(Basis, Descriptor) {
  auto b = build_basis(Manifold::kSphere, 4.0, 1.0);
  auto d = b->descriptor();
  EXPECT_EQ(d["manifold"], "sphere");
  EXPECT_EQ(d["modes"], b->size());
  EXPECT_EQ(d["hash"].get<std::string>().size(), 16u);
}

TEST(Projection, HalfOpenDyadicBand) {
  auto b = build_basis(Manifold::kTorus, 5.0, 1.0);
  SpectralCoeffs c(b);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = 1.0;
  auto p = project_interval(c, 2.0, 4.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const long e = (*b)[k].base_eigenvalue;
    const bool keep = e >= 4 && e < 16;
    EXPECT_EQ(p[k] != cplx{}, keep) << e;
  }
  EXPECT_EQ(p.at({4, 0}), cplx{});
  EXPECT_NE(p.at({3, 2}), cplx{});
}

TEST(Projection, IdempotentAndComplete) {
  auto b = build_basis(Manifold::kSphere, 20.0, 1.3);
  auto rng = make_rng(11);
  auto c = random_field(b, rng, [](const Mode&) { return 1.0; });
  auto p = project_interval(c, 1.0, 3.5);
  auto pp = project_interval(p, 1.0, 3.5);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(p[k], pp[k]);
  SpectralCoeffs sum(b);
  for (double N : dyadic_scales(*b)) sum += dyadic_projection(c, N);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(sum[k], c[k]);
  EXPECT_THROW(project_interval(c, 2.0, 2.0), std::invalid_argument);
}

TEST(Sobolev, SingleModeAndParseval) {
  auto b = build_basis(Manifold::kTorus, 6.0, 1.0);
  SpectralCoeffs c(b);
  c.set({3, 4}, 1.0);
  EXPECT_DOUBLE_EQ(sobolev_norm(c, 1.0), std::sqrt(26.0));
  auto rng = make_rng(3);
  auto r = random_field(b, rng, [](const Mode&) { return 1.0; }, 2.5);
  EXPECT_NEAR(sobolev_norm(r, 0.0), r.norm(), 1e-15 * r.norm());
}

TEST(Sobolev, DyadicEquivalence) {
  auto b = build_basis(Manifold::kTorus, 40.0, 1.0);
  for (double s : {-0.7, 0.3, 0.7, 1.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      auto rng = make_rng(100 + trial);
      auto c = random_field(b, rng, [](const Mode& m) { return 1.0 / (1.0 + m.eigenvalue); });
      double dyadic = 0.0;
      for (double N : dyadic_scales(*b)) dyadic += std::pow(N, 2.0 * s) * dyadic_projection(c, N).norm_squared();
      const double ratio = sobolev_norm(c, s) / std::sqrt(dyadic);
      // on [N, 2N) the eigenvalues are integers below 4N^2, so 1 <= <nu>/N^2 < 4
      EXPECT_GE(ratio, std::pow(2.0, -std::abs(s)));
      EXPECT_LE(ratio, std::pow(2.0, std::abs(s)));
    }
  }
}

TEST(Sobolev, HomogeneousIgnoresZeroMode) {
  auto b = build_basis(Manifold::kSphere, 3.0, 1.0);
  SpectralCoeffs c(b);
  c.set({0, 0}, 5.0);
  EXPECT_EQ(homogeneous_norm(c, 0.8), 0.0);
  c.set({1, 0}, 1.0);
  EXPECT_NEAR(homogeneous_norm(c, 1.0), std::sqrt(2.0), 1e-15);
}

TEST(Coeffs, MismatchedBasesRejected) {
  auto a = build_basis(Manifold::kTorus, 3.0, 1.0);
  auto b = build_basis(Manifold::kTorus, 3.0, 2.0);
  SpectralCoeffs x(a), y(b);
  EXPECT_THROW(inner(x, y), MismatchError);
  EXPECT_THROW(SpectralCoeffs(a, std::vector<cplx>(3)), std::invalid_argument);
}

TEST(Scaling, LpConstant) {
  const double lam = 2.5;
  auto b = build_basis(Manifold::kTorus, 2.0, lam);
  SpectralCoeffs c(b);
  c.set({0, 0}, 2.0 * std::numbers::pi * lam);  // u = 1
  auto sides = lp_scaling_check(c, 2);
  EXPECT_NEAR(sides.lhs, lam * 2.0 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(sides.rhs, sides.lhs, 1e-12);
}

TEST(Scaling, LpSingleEigenfunction) {
  auto b = build_basis(Manifold::kSphere, 3.0, 1.5);
  SpectralCoeffs c(b);
  c.set({2, -1}, 1.0);
  auto sides = lp_scaling_check(c, 2);
  EXPECT_NEAR(sides.lhs, 1.0, 1e-13);
  EXPECT_NEAR(sides.rhs, 1.0, 1e-13);
}

TEST(Scaling, LpRandomFourth) {
  for (auto man : {Manifold::kTorus, Manifold::kSphere}) {
    auto b = build_basis(man, 4.0, 3.0);
    auto rng = make_rng(5);
    auto c = random_field(b, rng, [](const Mode&) { return 1.0; });
    auto sides = lp_scaling_check(c, 4);
    EXPECT_LE(std::abs(sides.lhs - sides.rhs) / sides.lhs, 1e-10);
    EXPECT_THROW(lp_scaling_check(c, 3), RefusalError);
  }
}
