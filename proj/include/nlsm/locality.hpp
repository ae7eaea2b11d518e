#pragma once

// Spectral localization of eigenfunction products: cluster profiles of f*g,
// sharp triangle-rule checks for quadruple correlations and the A_0 / A_n
// integration-by-parts identity on the flat torus.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsm/errors.hpp"
#include "nlsm/random.hpp"
#include "nlsm/spectra.hpp"
#include "nlsm/transform.hpp"

namespace nlsm {

/// K for target nu given clusters [lambda, lambda+1] and [mu, mu+1]; the
/// upper branch uses nu - lambda - 2, the lower one lambda - nu - 2.
inline double cluster_K(double nu, double lambda_c, double mu_c) {
  if (!(mu_c > 0.0)) throw std::invalid_argument("cluster_K: mu must be > 0");
  return nu >= lambda_c ? (nu - lambda_c - 2.0) / mu_c : (lambda_c - nu - 2.0) / mu_c;
}

/// Lambda(2, mu) = mu^{1/2}.
inline double cluster_prefactor(double mu_c) { return std::sqrt(mu_c); }

struct ProfileEntry {
  double nu = 0.0;
  double K = 0.0;
  double norm = 0.0;  // ||pi_[nu, nu+1) (f g)||_{L^2}
};

struct LocalityProfile {
  Manifold manifold = Manifold::kTorus;
  double lambda_cluster = 0.0;
  double mu_cluster = 0.0;
  double f_norm = 0.0;
  double g_norm = 0.0;
  double prefactor = 0.0;
  bool empty_cluster = false;
  double product_norm = 0.0;  // ||f g||_{L^2}
  double cluster_sum = 0.0;   // (sum over all unit clusters of ||pi(fg)||^2)^{1/2}
  std::vector<ProfileEntry> entries;
};

namespace detail {

inline bool localized_to(const SpectralCoeffs& c, double lo, double hi) {
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == cplx{}) continue;
    const double n = c.basis()[k].frequency;
    if (n < lo - 1e-12 || n > hi + 1e-12) return false;
  }
  return true;
}

inline BasisPtr product_basis(const SpectralCoeffs& f, const SpectralCoeffs& g, double extra = 0.0) {
  return build_basis(f.basis().manifold(), f.max_frequency() + g.max_frequency() + 2.0 + extra,
                     f.basis().scale());
}

}  // namespace detail

/// Exact product f*g projected on the unit clusters [nu, nu+1) for each target.
inline LocalityProfile product_localization_profile(const SpectralCoeffs& f, const SpectralCoeffs& g,
                                                    double lambda_c, double mu_c,
                                                    const std::vector<double>& targets) {
  check_same_space(f.basis(), g.basis());
  if (!detail::localized_to(f, lambda_c, lambda_c + 1.0) || !detail::localized_to(g, mu_c, mu_c + 1.0))
    throw std::invalid_argument("product_localization_profile: inputs not localized to their clusters");
  LocalityProfile p;
  p.manifold = f.basis().manifold();
  p.lambda_cluster = lambda_c;
  p.mu_cluster = mu_c;
  p.f_norm = f.norm();
  p.g_norm = g.norm();
  p.prefactor = cluster_prefactor(mu_c);
  p.empty_cluster = p.f_norm == 0.0 || p.g_norm == 0.0;

  double top = 0.0;
  for (double nu : targets) top = std::max(top, nu + 1.0);
  SpectralCoeffs prod(build_basis(p.manifold, 1.0, f.basis().scale()));
  if (!p.empty_cluster) {
    const SpectralCoeffs fs[] = {f, g};
    auto target = detail::product_basis(f, g, std::max(0.0, top - f.max_frequency() - g.max_frequency()));
    prod = pointwise_product(fs, target);
    const auto fb = conjugate(f), gb = conjugate(g);
    const SpectralCoeffs quad[] = {f, g, fb, gb};
    p.product_norm = std::sqrt(std::max(0.0, std::real(correlation_integral(quad))));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < prod.size(); ++k) sum += std::norm(prod[k]);
  p.cluster_sum = std::sqrt(sum);
  for (double nu : targets) {
    ProfileEntry e{nu, cluster_K(nu, lambda_c, mu_c), 0.0};
    if (!p.empty_cluster) e.norm = project_interval(prod, nu, nu + 1.0).norm();
    p.entries.push_back(e);
  }
  return p;
}

struct LocalizationVerdict {
  std::array<double, 4> n{};  // n1 = lowest frequency of e1, n2..n4 = highest of the others
  cplx integral{};
  bool sharp_rule_applies = false;  // n1 > n2 + n3 + n4 + 2
  bool threshold_rule_applies = false;  // n1 > C max(n2, n3, n4)
  bool vanishes = false;            // |integral| <= tol * max(1, prod ||e_i||)
  bool consistent = true;           // sharp rule applies => vanishes
};

/// Integral of e1 e2 e3 e4 against the sharp triangle rule.
inline LocalizationVerdict crude_localization_check(const SpectralCoeffs& e1, const SpectralCoeffs& e2,
                                                    const SpectralCoeffs& e3, const SpectralCoeffs& e4,
                                                    double C_threshold, double tol = 1e-10) {
  LocalizationVerdict v;
  double lo = 1e300;
  for (std::size_t k = 0; k < e1.size(); ++k)
    if (e1[k] != cplx{}) lo = std::min(lo, e1.basis()[k].frequency);
  v.n = {lo, e2.max_frequency(), e3.max_frequency(), e4.max_frequency()};
  const SpectralCoeffs fs[] = {e1, e2, e3, e4};
  v.integral = correlation_integral(fs);
  const double scale = e1.norm() * e2.norm() * e3.norm() * e4.norm();
  v.sharp_rule_applies = v.n[0] > v.n[1] + v.n[2] + v.n[3] + 2.0;
  v.threshold_rule_applies = v.n[0] > C_threshold * std::max({v.n[1], v.n[2], v.n[3]});
  v.vanishes = std::abs(v.integral) <= tol * std::max(scale, 1.0);
  v.consistent = !v.sharp_rule_applies || v.vanishes;
  return v;
}

// ---------------------------------------------------------------------------
// A_0 / A_n identity on the flat torus

/// A contraction term of B_n: counts of gradient pairings between the factor
/// pairs (2,3), (2,4), (3,4), with its integer coefficient.
struct ContractionTerm {
  std::array<int, 3> pairs{};  // multiplicities of p23, p24, p34
  long coefficient = 0;
};

inline const std::array<std::array<int, 2>, 3>& contraction_pairs() {
  static const std::array<std::array<int, 2>, 3> p{{{0, 1}, {0, 2}, {1, 2}}};  // factors e2, e3, e4
  return p;
}

/// B_n by repeating the induction step Delta B = -(sum n_i^2) B + 2 (p23 + p24 + p34) B,
/// valid because derivatives commute and curvature vanishes on the flat torus.
inline std::vector<ContractionTerm> bn_terms(int n) {
  if (n < 0) throw std::invalid_argument("bn_terms: n must be >= 0");
  std::map<std::array<int, 3>, long> cur{{{0, 0, 0}, 1}};
  for (int step = 0; step < n; ++step) {
    std::map<std::array<int, 3>, long> next;
    for (const auto& [key, c] : cur)
      for (int p = 0; p < 3; ++p) {
        auto k = key;
        ++k[p];
        next[k] += c;
      }
    cur = std::move(next);
  }
  std::vector<ContractionTerm> out;
  for (const auto& [key, c] : cur) out.push_back({key, c});
  return out;
}

/// Pairwise contraction structure of B_2, e.g. {23,24}: 2.
inline std::map<std::string, long> b2_coefficient_set() {
  static const char* names[] = {"23", "24", "34"};
  std::map<std::string, long> out;
  for (const auto& t : bn_terms(2)) {
    std::vector<std::string> parts;
    for (int p = 0; p < 3; ++p)
      for (int r = 0; r < t.pairs[p]; ++r) parts.emplace_back(names[p]);
    out["{" + parts[0] + "," + parts[1] + "}"] = t.coefficient;
  }
  return out;
}

/// d_x^px d_y^py applied spectrally on the torus.
inline SpectralCoeffs torus_partial(const SpectralCoeffs& c, int px, int py) {
  if (c.basis().manifold() != Manifold::kTorus) throw MismatchError("torus_partial: torus basis required");
  SpectralCoeffs out(c.basis_ptr());
  const double lam = c.basis().scale();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == cplx{}) continue;
    const auto& l = c.basis()[k].label;
    out[k] = c[k] * std::pow(cplx{0.0, l.a / lam}, px) * std::pow(cplx{0.0, l.b / lam}, py);
  }
  return out;
}

struct AnResult {
  int n = 0;
  double denominator = 0.0;  // n1^2 - n2^2 - n3^2 - n4^2
  cplx A0{};
  cplx An_symbolic{};
  cplx An_quadrature{};
  double rel_error_symbolic = 0.0;   // |A0 - (-2)^n An / D^n| / |A0|
  double rel_error_quadrature = 0.0;
  bool skipped = false;  // |D| < 1
  bool resonant = true;
};

namespace detail {

inline cplx character_integral(const std::array<std::array<int, 2>, 4>& xi) {
  int sx = 0, sy = 0;
  for (const auto& x : xi) {
    sx += x[0];
    sy += x[1];
  }
  return (sx == 0 && sy == 0) ? cplx{4.0 * std::numbers::pi * std::numbers::pi, 0.0} : cplx{};
}

inline SpectralCoeffs character(const BasisPtr& b, std::array<int, 2> xi) {
  SpectralCoeffs c(b);
  c.set({xi[0], xi[1]}, 2.0 * std::numbers::pi);  // e^{i xi.x} on the unit torus
  return c;
}

/// int e1 B_n(e2, e3, e4) by grid quadrature of spectral derivatives.
inline cplx an_by_quadrature(const BasisPtr& b, const std::array<std::array<int, 2>, 4>& xi, int n) {
  const auto e1 = character(b, xi[0]);
  std::array<SpectralCoeffs, 3> base{character(b, xi[1]), character(b, xi[2]), character(b, xi[3])};
  cplx total{};
  for (const auto& term : bn_terms(n)) {
    int npairs = term.pairs[0] + term.pairs[1] + term.pairs[2];
    std::vector<std::array<int, 2>> slots;  // factor indices of each pairing
    for (int p = 0; p < 3; ++p)
      for (int r = 0; r < term.pairs[p]; ++r) slots.push_back(contraction_pairs()[p]);
    cplx sum{};
    // sum over coordinate assignments of every contracted index
    for (int mask = 0; mask < (1 << npairs); ++mask) {
      std::array<std::array<int, 2>, 3> ord{};  // derivative orders per factor
      for (int j = 0; j < npairs; ++j) {
        const int axis = (mask >> j) & 1;
        ++ord[slots[j][0]][axis];
        ++ord[slots[j][1]][axis];
      }
      const SpectralCoeffs fs[] = {e1, torus_partial(base[0], ord[0][0], ord[0][1]),
                                   torus_partial(base[1], ord[1][0], ord[1][1]),
                                   torus_partial(base[2], ord[2][0], ord[2][1])};
      sum += correlation_integral(fs);
    }
    total += static_cast<double>(term.coefficient) * sum;
  }
  return total;
}

}  // namespace detail

/// Checks A_0 = (-2)^n A_n / (n1^2 - n2^2 - n3^2 - n4^2)^n for n = 1..n_iters with
/// e1 the resonant character -(xi2 + xi3 + xi4) unless `xi1` is given.
inline std::vector<AnResult> an_identity_check(std::array<int, 2> xi2, std::array<int, 2> xi3,
                                               std::array<int, 2> xi4, int n_iters,
                                               const std::array<int, 2>* xi1 = nullptr,
                                               bool with_quadrature = true) {
  if (n_iters < 1) throw std::invalid_argument("an_identity_check: n_iters must be >= 1");
  const std::array<int, 2> x1 = xi1 ? *xi1 : std::array<int, 2>{-(xi2[0] + xi3[0] + xi4[0]), -(xi2[1] + xi3[1] + xi4[1])};
  const std::array<std::array<int, 2>, 4> xi{x1, xi2, xi3, xi4};
  auto sq = [](std::array<int, 2> v) { return static_cast<double>(v[0]) * v[0] + static_cast<double>(v[1]) * v[1]; };
  auto dot = [](std::array<int, 2> u, std::array<int, 2> v) {
    return static_cast<double>(u[0]) * v[0] + static_cast<double>(u[1]) * v[1];
  };
  const double D = sq(x1) - sq(xi2) - sq(xi3) - sq(xi4);
  const cplx A0 = detail::character_integral(xi);
  double radius = 0.0;
  for (const auto& v : xi) radius = std::max(radius, std::sqrt(sq(v)));
  BasisPtr b = with_quadrature ? build_basis(Manifold::kTorus, radius, 1.0) : nullptr;

  std::vector<AnResult> out;
  for (int n = 1; n <= n_iters; ++n) {
    AnResult r;
    r.n = n;
    r.denominator = D;
    r.A0 = A0;
    r.resonant = A0 != cplx{};
    if (std::abs(D) < 1.0) {
      r.skipped = true;
      out.push_back(r);
      continue;
    }
    // each pairing contributes (i xi_a).(i xi_b) = -xi_a.xi_b on characters
    const double p[3] = {-dot(xi2, xi3), -dot(xi2, xi4), -dot(xi3, xi4)};
    cplx sym{};
    for (const auto& t : bn_terms(n))
      sym += static_cast<double>(t.coefficient) * std::pow(p[0], t.pairs[0]) * std::pow(p[1], t.pairs[1]) *
             std::pow(p[2], t.pairs[2]);
    r.An_symbolic = sym * A0;
    const double factor = std::pow(-2.0, n) / std::pow(D, n);
    auto rel = [&](cplx An) {
      const cplx rhs = factor * An;
      return r.resonant ? std::abs(A0 - rhs) / std::abs(A0) : std::abs(A0 - rhs);
    };
    r.rel_error_symbolic = rel(r.An_symbolic);
    if (with_quadrature) {
      r.An_quadrature = detail::an_by_quadrature(b, xi, n);
      r.rel_error_quadrature = rel(r.An_quadrature);
    }
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// cluster decay table on the sphere

inline constexpr int kClusterDegreeBudget = 512;

struct DecayRow {
  std::string manifold;
  double lambda_cluster = 0.0;
  double mu_cluster = 0.0;
  double nu = 0.0;
  double K = 0.0;
  double norm = 0.0;  // ||pi_nu(fg)|| / (Lambda(2, mu) ||f|| ||g||)
  double prefactor = 0.0;
  std::string branch;  // "upper" or "lower"
  std::uint64_t seed = 0;
};

/// Random sphere data at degree lambda_c and mu_c; targets nu = lambda +- (K mu + 2).
inline std::vector<DecayRow> cluster_decay_table(int lambda_c, int mu_c, const std::vector<double>& K_list,
                                                 std::uint64_t seed) {
  if (lambda_c < 0 || mu_c < 1) throw std::invalid_argument("cluster_decay_table: need lambda >= 0, mu >= 1");
  double Kmax = 0.0;
  for (double K : K_list) Kmax = std::max(Kmax, K);
  const double top = lambda_c + Kmax * mu_c + 3.0;
  if (top > kClusterDegreeBudget)
    throw RefusalError("cluster_decay_table: degree budget exceeded, need " + std::to_string(static_cast<int>(top)) +
                       " (max " + std::to_string(kClusterDegreeBudget) + ")");
  auto b = build_basis(Manifold::kSphere, std::max(lambda_c, mu_c) + 1.0, 1.0);
  auto rng = make_rng(seed, static_cast<std::uint64_t>(lambda_c), static_cast<std::uint64_t>(mu_c));
  auto at_degree = [](int l) { return [l](const Mode& m) { return m.label.a == l ? 1.0 : 0.0; }; };
  auto f = random_field(b, rng, at_degree(lambda_c));
  auto g = random_field(b, rng, at_degree(mu_c));

  std::vector<double> targets;
  std::vector<std::pair<double, const char*>> meta;
  for (double K : K_list) {
    targets.push_back(lambda_c + K * mu_c + 2.0);
    meta.emplace_back(K, "upper");
    const double low = lambda_c - K * mu_c - 2.0;
    if (low >= 0.0) {
      targets.push_back(low);
      meta.emplace_back(K, "lower");
    }
  }
  auto prof = product_localization_profile(f, g, lambda_c, mu_c, targets);
  std::vector<DecayRow> rows;
  const double denom = prof.prefactor * prof.f_norm * prof.g_norm;
  for (std::size_t i = 0; i < prof.entries.size(); ++i) {
    DecayRow r;
    r.manifold = "sphere";
    r.lambda_cluster = lambda_c;
    r.mu_cluster = mu_c;
    r.nu = prof.entries[i].nu;
    r.K = meta[i].first;
    r.norm = denom > 0.0 ? prof.entries[i].norm / denom : 0.0;
    r.prefactor = prof.prefactor;
    r.branch = meta[i].second;
    r.seed = seed;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace nlsm
