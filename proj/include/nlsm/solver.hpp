#pragma once

// Time stepping for i u_t + Delta u = |u|^2 u in the eigenbasis of M_lambda.
// Strang splitting alternates the exact linear flow with the exact pointwise
// phase rotation of the nonlinear flow; classical RK4 on the Galerkin system
// serves as an independent reference.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsm/errors.hpp"
#include "nlsm/imethod.hpp"
#include "nlsm/spectra.hpp"
#include "nlsm/transform.hpp"

namespace nlsm {

enum class Scheme { kSplitStepStrang, kReferenceRK4 };

inline const char* to_string(Scheme s) { return s == Scheme::kSplitStepStrang ? "split-step" : "rk4"; }

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "split-step" || s == "strang") return Scheme::kSplitStepStrang;
  if (s == "rk4" || s == "reference") return Scheme::kReferenceRK4;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected split-step|rk4)");
}

struct EvolveConfig {
  double dt = 1e-3;
  double T = 1.0;  // negative T integrates backwards in time
  Scheme scheme = Scheme::kSplitStepStrang;
  int record_every = 1;
  std::optional<IMultiplier> mult;
  double stability_c = 0.5;  // RK4 requires dt <= stability_c / nu_max
  bool nonlinear = true;
  bool diagnostics = true;  // compute EnergyReport at recorded times
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralCoeffs> states;
  std::vector<EnergyReport> reports;

  const SpectralCoeffs& final_state() const { return states.back(); }
};

/// e^{it Delta}: coefficient k picks up e^{-i nu_k t}.
inline SpectralCoeffs linear_propagate(const SpectralCoeffs& c, double t) {
  SpectralCoeffs out(c.basis_ptr());
  for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k] * std::polar(1.0, -c.basis()[k].eigenvalue * t);
  return out;
}

/// Stepper bound to one basis. The nonlinear grid has degree 4K so that
/// |u|^2 u is analysed without aliasing.
class NlsStepper {
 public:
  explicit NlsStepper(BasisPtr basis)
      : basis_(std::move(basis)),
        grid_(grid_for(basis_->manifold(), basis_->scale(), 4 * basis_->extent())),
        tr_(basis_, grid_),
        field_(grid_->size()),
        scratch_(grid_->size()) {}

  const BasisPtr& basis() const noexcept { return basis_; }

  void linear(std::span<cplx> c, double h) const {
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -(*basis_)[k].eigenvalue * h);
  }

  /// u <- Pi(u exp(-i |u|^2 h)).
  void phase_rotation(std::span<cplx> c, double h) {
    tr_.synthesize(c, field_);
    for (auto& v : field_) v *= std::polar(1.0, -std::norm(v) * h);
    tr_.analyze(field_, c, scratch_);
  }

  /// out = -i nu c - i Pi(|u|^2 u).
  void rhs(std::span<const cplx> c, std::span<cplx> out, bool nonlinear) {
    if (nonlinear) {
      tr_.synthesize(c, field_);
      for (auto& v : field_) v *= std::norm(v);
      tr_.analyze(field_, out, scratch_);
    } else {
      std::fill(out.begin(), out.end(), cplx{});
    }
    const cplx mi{0.0, -1.0};
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = mi * ((*basis_)[k].eigenvalue * c[k] + out[k]);
  }

 private:
  BasisPtr basis_;
  GridPtr grid_;
  SpectralTransform tr_;
  std::vector<cplx> field_;
  std::vector<cplx> scratch_;
};

inline void validate(const EvolveConfig& cfg, const SpectralBasis& b) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("evolve: dt must be > 0");
  if (!std::isfinite(cfg.T) || cfg.T == 0.0) throw std::invalid_argument("evolve: T must be nonzero");
  if (cfg.dt > std::abs(cfg.T) * (1.0 + 1e-12)) throw std::invalid_argument("evolve: dt must not exceed |T|");
  if (cfg.record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
  if (cfg.scheme == Scheme::kReferenceRK4) {
    double nu_max = 0.0;
    for (const auto& m : b.modes()) nu_max = std::max(nu_max, m.eigenvalue);
    if (nu_max > 0.0 && cfg.dt > cfg.stability_c / nu_max)
      throw RefusalError("evolve: rk4 needs dt <= " + std::to_string(cfg.stability_c / nu_max) +
                         " for nu_max = " + std::to_string(nu_max));
  }
}

/// Number of uniform steps used for cfg (step size |T|/n <= dt).
inline long step_count(const EvolveConfig& cfg) {
  return std::max(1L, static_cast<long>(std::ceil(std::abs(cfg.T) / cfg.dt - 1e-9)));
}

inline Trajectory evolve(const SpectralCoeffs& c0, const EvolveConfig& cfg) {
  validate(cfg, c0.basis());
  const long n = step_count(cfg);
  const double h = cfg.T / static_cast<double>(n);
  NlsStepper st(c0.basis_ptr());
  const std::size_t m = c0.size();
  std::vector<cplx> c(c0.values().begin(), c0.values().end());
  std::vector<cplx> k1(m), k2(m), k3(m), k4(m), tmp(m);

  Trajectory traj;
  auto record = [&](double t) {
    SpectralCoeffs s(c0.basis_ptr(), c);
    traj.times.push_back(t);
    if (cfg.diagnostics) traj.reports.push_back(functionals(s, cfg.mult));
    traj.states.push_back(std::move(s));
  };
  record(0.0);

  double mass = c0.norm_squared();
  for (long step = 1; step <= n; ++step) {
    if (cfg.scheme == Scheme::kSplitStepStrang) {
      st.linear(c, 0.5 * h);
      if (cfg.nonlinear) st.phase_rotation(c, h);
      st.linear(c, 0.5 * h);
    } else {
      st.rhs(c, k1, cfg.nonlinear);
      for (std::size_t k = 0; k < m; ++k) tmp[k] = c[k] + 0.5 * h * k1[k];
      st.rhs(tmp, k2, cfg.nonlinear);
      for (std::size_t k = 0; k < m; ++k) tmp[k] = c[k] + 0.5 * h * k2[k];
      st.rhs(tmp, k3, cfg.nonlinear);
      for (std::size_t k = 0; k < m; ++k) tmp[k] = c[k] + h * k3[k];
      st.rhs(tmp, k4, cfg.nonlinear);
      for (std::size_t k = 0; k < m; ++k) c[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    double next = 0.0;
    for (const auto& v : c) next += std::norm(v);
    if (!std::isfinite(next) || next > 100.0 * mass + 1e-300) {
      throw InstabilityError("evolve: norm grew from " + std::to_string(std::sqrt(mass)) + " to " +
                             std::to_string(std::sqrt(next)) + " in step " + std::to_string(step) + " (t = " +
                             std::to_string(h * static_cast<double>(step)) + ", dt = " + std::to_string(h) + ")");
    }
    mass = next;
    if (step % cfg.record_every == 0 || step == n) record(h * static_cast<double>(step));
  }
  return traj;
}

struct EnergySeries {
  std::vector<double> times;
  std::vector<double> values;
  double increment = 0.0;  // sup_t |E~(t) - E~(0)|
};

inline EnergySeries modified_energy_series(const Trajectory& traj, const IMultiplier& mult) {
  EnergySeries out;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out.times.push_back(traj.times[i]);
    out.values.push_back(functionals(traj.states[i], mult).modified_energy);
  }
  for (double v : out.values) out.increment = std::max(out.increment, std::abs(v - out.values.front()));
  return out;
}

}  // namespace nlsm
