#pragma once

// Seeded random field generators. Coefficients are independent standard
// complex Gaussians on the selected modes, shaped by an amplitude profile and
// then normalised.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "nlsm/spectra.hpp"

namespace nlsm {

/// Deterministic engine for (seed, stream...) tuples so that every sweep point
/// and trial draws an independent, reproducible stream.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

inline cplx complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

/// Random field with coefficients amplitude(mode) * g_k; normalised to
/// `l2_norm` unless the selection is empty.
inline SpectralCoeffs random_field(const BasisPtr& basis, std::mt19937_64& rng,
                                   const std::function<double(const Mode&)>& amplitude, double l2_norm = 1.0) {
  SpectralCoeffs c(basis);
  for (std::size_t k = 0; k < basis->size(); ++k) {
    const double a = amplitude((*basis)[k]);
    const cplx g = complex_gaussian(rng);  // always drawn: stream independent of the profile
    if (a != 0.0) c[k] = a * g;
  }
  const double n = c.norm();
  if (n > 0.0 && l2_norm > 0.0) c *= cplx{l2_norm / n, 0.0};
  return c;
}

/// Unit-L^2 random data localised to frequencies in [lo, hi).
inline SpectralCoeffs random_band(const BasisPtr& basis, double lo, double hi, std::mt19937_64& rng,
                                  double l2_norm = 1.0) {
  return random_field(
      basis, rng, [lo, hi](const Mode& m) { return (m.frequency >= lo && m.frequency < hi) ? 1.0 : 0.0; },
      l2_norm);
}

/// Random data supported on modes with frequency <= band and Gaussian
/// spectral decay exp(-nu / (2 width^2)).
inline SpectralCoeffs random_smooth(const BasisPtr& basis, double band, double width, std::mt19937_64& rng,
                                    double l2_norm = 1.0) {
  return random_field(
      basis, rng,
      [band, width](const Mode& m) {
        return m.frequency <= band ? std::exp(-m.eigenvalue / (2.0 * width * width)) : 0.0;
      },
      l2_norm);
}

}  // namespace nlsm
