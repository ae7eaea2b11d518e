#pragma once

// The smoothing multiplier I, conserved and modified functionals, data
// rescaling to M_lambda and the parameter bookkeeping for the iteration.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nlsm/errors.hpp"
#include "nlsm/spectra.hpp"
#include "nlsm/transform.hpp"

namespace nlsm {

/// m(k) = m0(k / N) with m0 = 1 on [0, 1], t^{-(1-s)} on [2, inf) and a
/// quintic-smoothstep blend of the exponent in log2(t) on (1, 2).
class IMultiplier {
 public:
  IMultiplier(double N, double s) : N_(N), s_(s) {
    if (!(N > 0.0)) throw std::invalid_argument("IMultiplier: N must be > 0");
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("IMultiplier: s must lie in (0, 1]");
  }

  double N() const noexcept { return N_; }
  double s() const noexcept { return s_; }

  static double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }

  double profile(double t) const {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return std::pow(t, -(1.0 - s_));
    return std::pow(t, -(1.0 - s_) * smoothstep(std::log2(t)));
  }

  double operator()(double k) const { return profile(k / N_); }

 private:
  double N_;
  double s_;
};

inline double multiplier_value(const IMultiplier& m, double k) {
  if (k < 0.0) throw std::invalid_argument("multiplier_value: k must be >= 0");
  return m(k);
}

/// m(n_k) for every mode of the basis.
inline std::vector<double> multiplier_table(const SpectralBasis& b, const IMultiplier& m) {
  std::vector<double> out(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) out[k] = m(b[k].frequency);
  return out;
}

inline SpectralCoeffs apply_I(const SpectralCoeffs& c, const IMultiplier& m) {
  SpectralCoeffs out(c.basis_ptr());
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != cplx{}) out[k] = c[k] * m(c.basis()[k].frequency);
  return out;
}

struct EnergyReport {
  double mass = 0.0;
  double kinetic = 0.0;    // 1/2 int |grad Iu|^2
  double potential = 0.0;  // 1/4 int |Iu|^4
  double modified_energy = 0.0;
  double h_s_norm = 0.0;
};

/// (1/4) int |u|^4 by exact quadrature.
inline double quartic_potential(const SpectralCoeffs& u) {
  if (u.norm_squared() == 0.0) return 0.0;
  const auto ub = conjugate(u);
  const SpectralCoeffs fs[] = {u, u, ub, ub};
  return 0.25 * std::real(correlation_integral(fs));
}

/// Mass, kinetic and potential parts of the (modified) energy. Without a
/// multiplier I is the identity and modified_energy is the Hamiltonian;
/// h_s_norm then uses s = 1.
inline EnergyReport functionals(const SpectralCoeffs& c, const std::optional<IMultiplier>& mult = std::nullopt) {
  EnergyReport r;
  const auto& b = c.basis();
  const SpectralCoeffs iu = mult ? apply_I(c, *mult) : c;
  for (std::size_t k = 0; k < c.size(); ++k) {
    r.mass += std::norm(c[k]);
    r.kinetic += 0.5 * b[k].eigenvalue * std::norm(iu[k]);
  }
  r.potential = quartic_potential(iu);
  r.modified_energy = r.kinetic + r.potential;
  r.h_s_norm = sobolev_norm(c, mult ? mult->s() : 1.0);
  return r;
}

/// E[u] = 1/2 int |grad u|^2 + 1/4 int |u|^4.
inline double hamiltonian(const SpectralCoeffs& c) { return functionals(c).modified_energy; }

/// u0(x) = U0(x / lambda) / lambda on M_lambda. The orthonormal eigenfunctions
/// carry the same 1/lambda, so the coefficients are unchanged.
inline SpectralCoeffs rescale_data(const SpectralCoeffs& U0, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("rescale_data: lambda must be > 0");
  if (U0.basis().scale() != 1.0) throw MismatchError("rescale_data: input must live on the unit-scale manifold");
  return SpectralCoeffs(U0.basis().rescaled(lambda), std::vector<cplx>(U0.values().begin(), U0.values().end()));
}

/// int |grad I u0|^2 / (N^{2(1-s)} lambda^{-2s} ||U0||_{H^s}^2) for u0 = rescale_data(U0, lambda).
inline double kinetic_bound_constant(const SpectralCoeffs& U0, const IMultiplier& m, double lambda) {
  const auto u0 = rescale_data(U0, lambda);
  const auto iu = apply_I(u0, m);
  double grad = 0.0;
  for (std::size_t k = 0; k < iu.size(); ++k) grad += iu.basis()[k].eigenvalue * std::norm(iu[k]);
  const double hs = sobolev_norm(U0, m.s());
  const double scale = std::pow(m.N(), 2.0 * (1.0 - m.s())) * std::pow(lambda, -2.0 * m.s()) * hs * hs;
  return scale > 0.0 ? grad / scale : 0.0;
}

struct ScalingPlan {
  double lambda = 1.0;
  long iterations = 0;
  double T = 0.0;
  double growth_exponent = 0.0;
};

/// lambda = N^{(1-s)/s}, iterations = floor(lambda N^{1/2}),
/// T = delta lambda N^{1/2} / lambda^2, exponent 2s(1-s)/(3s-2).
inline ScalingPlan scaling_plan(double N, double s, double delta = 0.5) {
  if (!(N >= 2.0)) throw std::invalid_argument("scaling_plan: N must be >= 2");
  if (!(s <= 1.0)) throw std::invalid_argument("scaling_plan: s must be <= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("scaling_plan: delta must be > 0");
  if (!(s > 2.0 / 3.0))
    throw RefusalError("scaling_plan: s <= 2/3 lies outside the range where the growth exponent is finite");
  ScalingPlan p;
  p.lambda = std::pow(N, (1.0 - s) / s);
  const double reach = p.lambda * std::sqrt(N);
  p.iterations = static_cast<long>(std::floor(reach * (1.0 + 1e-12)));  // 16^{1/4} * 4 is 7.999...
  p.T = delta * reach / (p.lambda * p.lambda);
  p.growth_exponent = 2.0 * s * (1.0 - s) / (3.0 * s - 2.0);
  return p;
}

}  // namespace nlsm
