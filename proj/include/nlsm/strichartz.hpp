#pragma once

// Space-time norms of free Schroedinger evolutions: bilinear L^2_{t,x}
// products of two evolutions and linear mixed L^q_t L^r_x norms. Space
// integrals use exact grids; time integrals use a rule whose node spacing
// resolves the largest temporal frequency.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsm/errors.hpp"
#include "nlsm/legendre.hpp"
#include "nlsm/random.hpp"
#include "nlsm/spectra.hpp"
#include "nlsm/transform.hpp"

namespace nlsm {

/// Lambda(T, N1, N2) = (N2/N1)^{1/2} if T <= 1/N1, else (T N2)^{1/2}.
inline double lambda_reference(double T, double N1, double N2) {
  if (!(T > 0.0)) throw std::invalid_argument("lambda_reference: T must be > 0");
  if (!(N2 <= N1) || !(N2 > 0.0)) throw std::invalid_argument("lambda_reference: need 0 < N2 <= N1");
  return T <= 1.0 / N1 ? std::sqrt(N2 / N1) : std::sqrt(T * N2);
}

enum class TimeRuleKind { kGaussPanels, kSimpson };

inline const char* to_string(TimeRuleKind k) { return k == TimeRuleKind::kGaussPanels ? "gauss" : "simpson"; }

inline TimeRuleKind time_rule_from_string(const std::string& s) {
  if (s == "gauss") return TimeRuleKind::kGaussPanels;
  if (s == "simpson") return TimeRuleKind::kSimpson;
  throw std::invalid_argument("unknown time rule '" + s + "' (expected gauss|simpson)");
}

inline constexpr int kGaussPanelNodes = 16;

struct TimeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Smallest node count on [0, T] whose mean spacing is <= pi / (8 omega).
inline long required_time_nodes(double T, double omega_max) {
  return std::max(3L, static_cast<long>(std::ceil(8.0 * omega_max * T / std::numbers::pi)) + 1);
}

/// Rule on [0, T] with at least `count` nodes: composite Gauss-Legendre panels
/// of 16 nodes, or composite Simpson on an odd number of points.
inline TimeRule make_time_rule(double T, long count, TimeRuleKind kind) {
  TimeRule r;
  if (kind == TimeRuleKind::kGaussPanels) {
    const long panels = std::max(1L, (count + kGaussPanelNodes - 1) / kGaussPanelNodes);
    const auto gl = gauss_legendre(kGaussPanelNodes);
    const double h = T / static_cast<double>(panels);
    for (long p = 0; p < panels; ++p) {
      const double a = h * static_cast<double>(p);
      for (int j = 0; j < kGaussPanelNodes; ++j) {
        r.nodes.push_back(a + 0.5 * h * (gl.nodes[j] + 1.0));
        r.weights.push_back(0.5 * h * gl.weights[j]);
      }
    }
    return r;
  }
  long n = std::max(3L, count);
  if (n % 2 == 0) ++n;
  const double h = T / static_cast<double>(n - 1);
  for (long j = 0; j < n; ++j) {
    r.nodes.push_back(h * static_cast<double>(j));
    const double w = (j == 0 || j == n - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    r.weights.push_back(w * h / 3.0);
  }
  return r;
}

/// Time rule for temporal bandwidth omega_max. `time_nodes` = 0 picks the
/// count automatically; an explicit count below the requirement is refused.
inline TimeRule resolved_time_rule(double T, double omega_max, long time_nodes, TimeRuleKind kind) {
  const long need = required_time_nodes(T, omega_max);
  if (time_nodes != 0 && time_nodes < need)
    throw RefusalError("time quadrature: " + std::to_string(time_nodes) + " nodes cannot resolve temporal frequency " +
                       std::to_string(omega_max) + " on [0, " + std::to_string(T) + "]; need at least " +
                       std::to_string(need));
  return make_time_rule(T, std::max(need, time_nodes), kind);
}

namespace detail {

inline double max_eigenvalue(const SpectralCoeffs& c) {
  double m = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != cplx{}) m = std::max(m, c.basis()[k].eigenvalue);
  return m;
}

inline void propagate_into(const SpectralCoeffs& c, double t, std::vector<cplx>& out) {
  out.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k)
    out[k] = c[k] == cplx{} ? cplx{} : c[k] * std::polar(1.0, -c.basis()[k].eigenvalue * t);
}

}  // namespace detail

struct BilinearOptions {
  long time_nodes = 0;  // 0 = automatic
  TimeRuleKind rule = TimeRuleKind::kGaussPanels;
};

/// ||e^{it Delta} u0 e^{it Delta} v0||_{L^2([0,T] x M_lambda)}.
inline double bilinear_norm(const SpectralCoeffs& u0, const SpectralCoeffs& v0, double T,
                            const BilinearOptions& opt = {}) {
  if (!(T > 0.0)) throw std::invalid_argument("bilinear_norm: T must be > 0");
  check_same_space(u0.basis(), v0.basis());
  if (u0.norm_squared() == 0.0 || v0.norm_squared() == 0.0) return 0.0;
  const double omega = detail::max_eigenvalue(u0) + detail::max_eigenvalue(v0);
  const auto rule = resolved_time_rule(T, omega, opt.time_nodes, opt.rule);
  const int degree = 2 * (u0.support_extent() + v0.support_extent());
  auto grid = grid_for(u0.basis().manifold(), u0.basis().scale(), degree);
  SpectralTransform tu(u0.basis_ptr(), grid), tv(v0.basis_ptr(), grid);
  std::vector<cplx> cu, cv, fu(grid->size()), fv(grid->size());
  const auto cols = static_cast<std::size_t>(grid->cols());
  double total = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    detail::propagate_into(u0, rule.nodes[j], cu);
    detail::propagate_into(v0, rule.nodes[j], cv);
    tu.synthesize(cu, fu);
    tv.synthesize(cv, fv);
    double space = 0.0;
    for (std::size_t r = 0; r < static_cast<std::size_t>(grid->rows()); ++r) {
      double row = 0.0;
      for (std::size_t k = 0; k < cols; ++k) row += std::norm(fu[r * cols + k] * fv[r * cols + k]);
      space += grid->weight(r) * row;
    }
    total += rule.weights[j] * space;
  }
  return std::sqrt(total);
}

/// Both sides of the dilation identity for the bilinear norm:
/// lhs on M_lambda over [0, 1], rhs = lambda^2 times the norm of the dilated
/// data on M over [0, lambda^{-2}].
struct BilinearScalingSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline BilinearScalingSides bilinear_scaling_check(const SpectralCoeffs& u0, const SpectralCoeffs& v0,
                                                   const BilinearOptions& opt = {}) {
  const double lam = u0.basis().scale();
  BilinearScalingSides s;
  s.lhs = bilinear_norm(u0, v0, 1.0, opt);
  s.rhs = lam * lam * bilinear_norm(dilate_to_base(u0), dilate_to_base(v0), 1.0 / (lam * lam), opt);
  return s;
}

enum class StrichartzRegime {
  kSemiclassical,  // T = 1/N1, reference Lambda(T, N1, N2)
  kRescaled,       // T = 1 on M_lambda, reference Lambda(lambda^{-2}, lambda N1, lambda N2)
};

struct StrichartzSample {
  Manifold manifold = Manifold::kTorus;
  double N1 = 0.0;
  double N2 = 0.0;
  double lambda = 1.0;
  double T = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double measured = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
};

struct SweepOptions {
  Manifold manifold = Manifold::kTorus;
  StrichartzRegime regime = StrichartzRegime::kSemiclassical;
  bool low_band_from_zero = false;  // v0 supported on [0, 2 N2) instead of [N2, 2 N2)
  BilinearOptions bilinear;
};

/// Data for one (N1, trial) point: unit-L^2 Gaussian data on [N1, 2N1) and [N2, 2N2).
inline std::pair<SpectralCoeffs, SpectralCoeffs> strichartz_data(const BasisPtr& basis, double N1, double N2,
                                                                 std::uint64_t seed, int trial,
                                                                 bool low_band_from_zero = false) {
  auto rng = make_rng(seed, static_cast<std::uint64_t>(N1 * 1024.0), static_cast<std::uint64_t>(trial));
  auto u0 = random_band(basis, N1, 2.0 * N1, rng);
  auto v0 = random_band(basis, low_band_from_zero ? 0.0 : N2, 2.0 * N2, rng);
  return {std::move(u0), std::move(v0)};
}

inline StrichartzSample strichartz_point(double N1, double N2, double lambda, int trial, std::uint64_t seed,
                                         const SweepOptions& opt) {
  if (!(N2 <= N1)) throw std::invalid_argument("strichartz_sweep: N2 must not exceed N1");
  auto basis = build_basis(opt.manifold, std::max(1.0, 2.0 * N1), lambda);
  auto [u0, v0] = strichartz_data(basis, N1, N2, seed, trial, opt.low_band_from_zero);
  if (u0.norm_squared() == 0.0 || v0.norm_squared() == 0.0)
    throw RefusalError("strichartz_sweep: no eigenvalues in the band for N1 = " + std::to_string(N1) +
                       ", N2 = " + std::to_string(N2));
  StrichartzSample s;
  s.manifold = opt.manifold;
  s.N1 = N1;
  s.N2 = N2;
  s.lambda = lambda;
  s.trial = trial;
  s.seed = seed;
  if (opt.regime == StrichartzRegime::kSemiclassical) {
    s.T = 1.0 / N1;
    s.reference = lambda_reference(s.T, N1, N2);
  } else {
    s.T = 1.0;
    s.reference = lambda_reference(1.0 / (lambda * lambda), lambda * N1, lambda * N2);
  }
  s.measured = bilinear_norm(u0, v0, s.T, opt.bilinear);
  s.ratio = s.measured / s.reference;
  return s;
}

/// Sequential sweep in (N1, trial) order; see experiments for the parallel driver.
inline std::vector<StrichartzSample> strichartz_sweep(const std::vector<double>& N1_list, double N2, double lambda,
                                                      int trials, std::uint64_t seed, const SweepOptions& opt = {}) {
  if (N1_list.empty()) throw std::invalid_argument("strichartz_sweep: empty N1 list");
  std::vector<StrichartzSample> out;
  for (double N1 : N1_list)
    for (int t = 0; t < trials; ++t) out.push_back(strichartz_point(N1, N2, lambda, t, seed, opt));
  return out;
}

/// ||e^{it Delta} u0||_{L^q_t([0,T]) L^r_x(M_lambda)} for (q, r) in
/// {(4, 4), (8, 8/3), (8, 8)}. Even r is integrated exactly in space; r = 8/3
/// uses a grid of degree 8K.
inline double linear_strichartz_norm(const SpectralCoeffs& u0, double q, double r, double T,
                                     const BilinearOptions& opt = {}) {
  const bool ok = (q == 4.0 && r == 4.0) || (q == 8.0 && std::abs(r - 8.0 / 3.0) < 1e-12) || (q == 8.0 && r == 8.0);
  if (!ok) throw std::invalid_argument("linear_strichartz_norm: supported (q, r) are (4,4), (8,8/3), (8,8)");
  if (!(T > 0.0)) throw std::invalid_argument("linear_strichartz_norm: T must be > 0");
  if (u0.norm_squared() == 0.0) return 0.0;
  const int K = u0.support_extent();
  const int degree = (r == 4.0) ? 4 * K : 8 * K;
  auto grid = grid_for(u0.basis().manifold(), u0.basis().scale(), degree);
  SpectralTransform tr(u0.basis_ptr(), grid);
  // |u|^p oscillates in time at up to (p/2)(nu_max - nu_min)
  const double omega = 0.5 * std::max(q, r) * detail::max_eigenvalue(u0);
  const auto rule = resolved_time_rule(T, std::max(omega, 1.0), opt.time_nodes, opt.rule);
  std::vector<cplx> c, f(grid->size());
  const auto cols = static_cast<std::size_t>(grid->cols());
  double total = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    detail::propagate_into(u0, rule.nodes[j], c);
    tr.synthesize(c, f);
    double space = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(grid->rows()); ++i) {
      double row = 0.0;
      for (std::size_t k = 0; k < cols; ++k) row += std::pow(std::abs(f[i * cols + k]), r);
      space += grid->weight(i) * row;
    }
    total += rule.weights[j] * std::pow(space, q / r);
  }
  return std::pow(total, 1.0 / q);
}

}  // namespace nlsm
