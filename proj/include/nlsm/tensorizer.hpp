#pragma once

// Fourier-series tensorization of multilinear spectral symbols on a block.
// Variables are rescaled by n_i = origin_i + scale_i * t_i with t_i in
// [0, width_i]; the symbol Psi(t) is written as sum_j A(j) e^{i theta_j . t}
// with theta = j pi / 2 (period 4) and |j_i| <= J.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsm/errors.hpp"
#include "nlsm/imethod.hpp"
#include "nlsm/spectra.hpp"
#include "nlsm/transform.hpp"

namespace nlsm {

inline constexpr double kTensorPeriod = 4.0;
inline constexpr int kMaxArity = 4;

using SymbolFn = std::function<double(std::span<const double>)>;

struct SymbolBlock {
  std::vector<double> origin;
  std::vector<double> scale;
  std::vector<double> width;  // t_i in [0, width_i]
  SymbolFn symbol;

  int arity() const { return static_cast<int>(origin.size()); }

  void validate() const {
    const auto k = origin.size();
    if (k == 0 || k > kMaxArity) throw std::invalid_argument("SymbolBlock: arity must be 1..4");
    if (scale.size() != k || width.size() != k) throw std::invalid_argument("SymbolBlock: inconsistent axis data");
    for (std::size_t i = 0; i < k; ++i) {
      if (!(scale[i] > 0.0)) throw std::invalid_argument("SymbolBlock: scales must be > 0");
      if (!(width[i] > 0.0 && width[i] < kTensorPeriod))
        throw std::invalid_argument("SymbolBlock: widths must lie in (0, 4)");
    }
    if (!symbol) throw std::invalid_argument("SymbolBlock: no symbol");
  }

  double n_of(int axis, double t) const { return origin[axis] + scale[axis] * t; }
  double t_of(int axis, double n) const { return (n - origin[axis]) / scale[axis]; }

  double psi(std::span<const double> t) const {
    double n[kMaxArity];
    for (int i = 0; i < arity(); ++i) n[i] = n_of(i, t[i]);
    return symbol(std::span<const double>(n, t.size()));
  }
};

/// Dyadic block n_i in [N_i, 2 N_i].
inline SymbolBlock dyadic_block(const std::vector<double>& N, SymbolFn symbol) {
  SymbolBlock b{N, N, std::vector<double>(N.size(), 1.0), std::move(symbol)};
  b.validate();
  return b;
}

enum class Extension { kFourierExtension, kBumpWindow };

inline const char* to_string(Extension e) {
  return e == Extension::kFourierExtension ? "fourier-extension" : "bump-window";
}

inline Extension extension_from_string(const std::string& s) {
  if (s == "fourier-extension") return Extension::kFourierExtension;
  if (s == "bump-window") return Extension::kBumpWindow;
  throw std::invalid_argument("unknown extension '" + s + "' (expected fourier-extension or bump-window)");
}

/// Identifier written next to l1 masses, which depend on the extension.
inline std::string window_id(Extension e) {
  return e == Extension::kFourierExtension ? "fourier-extension/period4/chebyshev-lsq" : "bump-cinf/period4/trapezoid";
}

struct TensorExpansion {
  std::vector<double> origin, scale, width;
  int J = 0;  // modes per axis 2J + 1
  Extension extension = Extension::kFourierExtension;
  std::vector<cplx> coefficients;  // row-major over axes, index j + J per axis
  double l1_mass = 0.0;
  double sup_error = 0.0;           // absolute, on the held-out grid
  double sup_symbol = 0.0;          // sup |Psi| on the same grid
  double relative_error = 0.0;      // sup_error / sup_symbol
  double tolerance = 0.0;
  bool failed = false;

  int arity() const { return static_cast<int>(origin.size()); }
  int modes_per_axis() const { return 2 * J + 1; }
  static double theta(int j) { return 2.0 * std::numbers::pi * j / kTensorPeriod; }
};

namespace detail {

using cplxl = std::complex<long double>;
using MatrixXcl = Eigen::Matrix<cplxl, Eigen::Dynamic, Eigen::Dynamic>;

/// new[o, m, i] = sum_s P(m, s) old[o, s, i] along `axis`.
inline std::vector<cplxl> mode_product(const std::vector<cplxl>& data, std::vector<int>& dims, int axis,
                                       const MatrixXcl& P) {
  std::size_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= dims[i];
  for (std::size_t i = axis + 1; i < dims.size(); ++i) inner *= dims[i];
  const auto S = static_cast<std::size_t>(dims[axis]);
  const auto M = static_cast<std::size_t>(P.rows());
  std::vector<cplxl> out(outer * M * inner);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t m = 0; m < M; ++m) {
      cplxl* dst = &out[(o * M + m) * inner];
      for (std::size_t s = 0; s < S; ++s) {
        const cplxl p = P(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(s));
        const cplxl* src = &data[(o * S + s) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] += p * src[i];
      }
    }
  dims[axis] = static_cast<int>(M);
  return out;
}

/// Symbol values on a tensor grid of per-axis points, row-major.
inline std::vector<cplx> sample_tensor(const SymbolBlock& b, const std::vector<std::vector<double>>& pts) {
  const int k = b.arity();
  std::size_t total = 1;
  for (const auto& p : pts) total *= p.size();
  std::vector<cplx> out(total);
  std::vector<std::size_t> idx(k, 0);
  double t[kMaxArity];
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (int i = k - 1; i >= 0; --i) {
      idx[i] = r % pts[i].size();
      r /= pts[i].size();
      t[i] = pts[i][idx[i]];
    }
    const double v = b.psi(std::span<const double>(t, static_cast<std::size_t>(k)));
    if (!std::isfinite(v)) throw RefusalError("tensorize: symbol is not finite on the sampling set");
    out[flat] = v;
  }
  return out;
}

inline Eigen::VectorXcd axis_exponentials(int J, double t) {
  Eigen::VectorXcd e(2 * J + 1);
  for (int j = -J; j <= J; ++j) e(j + J) = std::polar(1.0, TensorExpansion::theta(j) * t);
  return e;
}

/// C-infinity step: 0 for x <= 0, 1 for x >= 1.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

/// 1 on [0, w], 0 outside (-(4 - w)/2, w + (4 - w)/2).
inline double bump_window(double t, double w) {
  const double ramp = 0.5 * (kTensorPeriod - w);
  if (t < 0.0) return smooth_step((t + ramp) / ramp);
  if (t > w) return smooth_step((w + ramp - t) / ramp);
  return 1.0;
}

}  // namespace detail

/// sum_j A(j) e^{i theta_j . t}.
inline cplx evaluate(const TensorExpansion& e, std::span<const double> t) {
  const int k = e.arity();
  if (static_cast<int>(t.size()) != k) throw std::invalid_argument("evaluate: wrong number of variables");
  std::vector<cplx> cur = e.coefficients;
  const int M = e.modes_per_axis();
  for (int axis = k - 1; axis >= 0; --axis) {
    const auto ex = detail::axis_exponentials(e.J, t[axis]);
    std::vector<cplx> next(cur.size() / M);
    for (std::size_t o = 0; o < next.size(); ++o) {
      cplx s{};
      for (int m = 0; m < M; ++m) s += cur[o * M + m] * ex(m);
      next[o] = s;
    }
    cur = std::move(next);
  }
  return cur[0];
}

/// Fourier coefficients of the 4-periodic extension of Psi. Fourier extension
/// fits the trigonometric polynomial to Chebyshev samples on the block in the
/// least-squares sense; bump-window multiplies Psi by a C-infinity window and
/// uses trapezoidal quadrature over one period. The reconstruction error on a
/// held-out grid sets `failed` when above `tolerance` (relative to sup |Psi|).
inline TensorExpansion tensorize(const SymbolBlock& block, int J, Extension ext = Extension::kFourierExtension,
                                 double tolerance = 1e-6) {
  block.validate();
  if (J < 0) throw std::invalid_argument("tensorize: mode cap must be >= 0");
  const int k = block.arity();
  const int M = 2 * J + 1;
  TensorExpansion e;
  e.origin = block.origin;
  e.scale = block.scale;
  e.width = block.width;
  e.J = J;
  e.extension = ext;
  e.tolerance = tolerance;

  // the extension problem is ill-conditioned (cond ~ 1e5 at J = 4, ~1e8 at
  // J = 6), so the pseudo-inverse and the tensor contractions run in long double
  using detail::cplxl;
  using detail::MatrixXcl;
  const long double pi_l = std::numbers::pi_v<long double>;
  auto theta_l = [&](int j) { return 2.0L * pi_l * j / static_cast<long double>(kTensorPeriod); };
  std::vector<std::vector<double>> pts(k);
  // candidate per-axis projections; more than one only for Fourier extension
  std::vector<std::vector<MatrixXcl>> candidates;
  if (ext == Extension::kFourierExtension) {
    const int S = std::max(20, 2 * M + 2);
    std::vector<Eigen::JacobiSVD<MatrixXcl>> svds;
    for (int i = 0; i < k; ++i) {
      const long double w = block.width[i];
      MatrixXcl V(S, M);
      for (int r = 0; r < S; ++r) {
        const long double x = w * (0.5L - 0.5L * std::cos(pi_l * (r + 0.5L) / S));
        pts[i].push_back(static_cast<double>(x));
        const long double xd = static_cast<double>(x);  // the symbol is sampled at the double node
        for (int j = -J; j <= J; ++j) V(r, j + J) = std::polar(1.0L, theta_l(j) * xd);
      }
      svds.emplace_back(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    }
    // sample rounding is amplified by up to 1/sigma_min on every axis, which
    // compounds over k axes; truncating small singular values caps that at
    // the price of some bias, and the held-out error picks the cutoff
    std::vector<long double> cutoffs{1e-20L};
    for (long double budget : {32.0L, 24.0L, 20.0L}) {
      const long double c = std::pow(10.0L, -budget / k);
      if (c > cutoffs.back() * 10) cutoffs.push_back(c);
    }
    for (long double c : cutoffs) {
      std::vector<MatrixXcl> proj(k);
      for (int i = 0; i < k; ++i) {
        svds[i].setThreshold(c);
        proj[i] = svds[i].solve(MatrixXcl::Identity(S, S));
      }
      candidates.push_back(std::move(proj));
    }
  } else {
    const int Q = std::max(4 * M, 32);
    std::vector<MatrixXcl> proj(k);
    for (int i = 0; i < k; ++i) {
      const double w = block.width[i];
      const double start = -0.5 * (kTensorPeriod - w);
      MatrixXcl P(M, Q);
      for (int r = 0; r < Q; ++r) {
        const double x = start + kTensorPeriod * r / Q;
        pts[i].push_back(x);
        for (int j = -J; j <= J; ++j)
          P(j + J, r) = static_cast<long double>(detail::bump_window(x, w)) *
                        std::polar(1.0L, -theta_l(j) * static_cast<long double>(x)) / static_cast<long double>(Q);
      }
      proj[i] = P;
    }
    candidates.push_back(std::move(proj));
  }

  // held-out grid: uniform, including the block edges
  const int G = k <= 2 ? 41 : (k == 3 ? 17 : 11);
  std::vector<std::vector<double>> hold(k);
  std::vector<MatrixXcl> synth(k);
  for (int i = 0; i < k; ++i) {
    synth[i].resize(G, M);
    for (int r = 0; r < G; ++r) {
      hold[i].push_back(block.width[i] * r / (G - 1));
      for (int j = -J; j <= J; ++j)
        synth[i](r, j + J) = std::polar(1.0L, theta_l(j) * static_cast<long double>(hold[i][r]));
    }
  }
  const auto exact = detail::sample_tensor(block, hold);
  for (const auto& v : exact) e.sup_symbol = std::max(e.sup_symbol, std::abs(v));

  const auto sampled = detail::sample_tensor(block, pts);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& proj : candidates) {
    std::vector<cplxl> data(sampled.begin(), sampled.end());
    std::vector<int> dims(k);
    for (int i = 0; i < k; ++i) dims[i] = static_cast<int>(pts[i].size());
    for (int i = 0; i < k; ++i) data = detail::mode_product(data, dims, i, proj[i]);
    std::vector<cplx> coef(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
      coef[i] = {static_cast<double>(data[i].real()), static_cast<double>(data[i].imag())};
    // reconstruct the rounded coefficients on the held-out grid
    std::vector<cplxl> rec(coef.begin(), coef.end());
    for (int i = 0; i < k; ++i) rec = detail::mode_product(rec, dims, i, synth[i]);
    double err = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i)
      err = std::max(err, static_cast<double>(std::abs(rec[i] - cplxl(exact[i].real(), exact[i].imag()))));
    // expansions are applied in double, where l1 mass turns into rounding
    double l1 = 0.0;
    for (const auto& a : coef) l1 += std::abs(a);
    const double score = err + std::numeric_limits<double>::epsilon() * l1;
    if (!(score < best)) continue;
    best = score;
    e.coefficients = std::move(coef);
    e.sup_error = err;
  }
  if (e.coefficients.empty()) throw RefusalError("tensorize: reconstruction is not finite");
  for (const auto& a : e.coefficients) e.l1_mass += std::abs(a);
  e.relative_error = e.sup_symbol > 0.0 ? e.sup_error / e.sup_symbol : e.sup_error;
  e.failed = !(e.relative_error <= tolerance);
  return e;
}

/// n -> e^{i theta t(n)} on the modes of one field; |.| = 1 so L^2 norms are kept.
inline SpectralCoeffs modulate(const SpectralCoeffs& f, double theta, double origin, double scale) {
  SpectralCoeffs out(f.basis_ptr());
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] != cplx{}) out[k] = f[k] * std::polar(1.0, theta * (f.basis()[k].frequency - origin) / scale);
  return out;
}

/// sum_theta A(theta) int prod_i f_i^{theta_i}, each f_i modulated on its axis.
inline cplx apply_tensorized_form(const TensorExpansion& e, std::span<const SpectralCoeffs> fields) {
  const int k = e.arity();
  if (static_cast<int>(fields.size()) != k) throw MismatchError("apply_tensorized_form: field count differs from arity");
  int degree = 0;
  for (int i = 0; i < k; ++i) {
    check_same_space(fields[i].basis(), fields[0].basis());
    for (std::size_t m = 0; m < fields[i].size(); ++m) {
      if (fields[i][m] == cplx{}) continue;
      const double t = (fields[i].basis()[m].frequency - e.origin[i]) / e.scale[i];
      if (t < -1e-9 || t > e.width[i] + 1e-9)
        throw MismatchError("apply_tensorized_form: field " + std::to_string(i) + " has modes outside its block");
    }
    degree += fields[i].support_extent();
  }
  const auto& b0 = fields[0].basis();
  auto grid = grid_for(b0.manifold(), b0.scale(), degree);
  const auto X = static_cast<Eigen::Index>(grid->size());
  const int M = e.modes_per_axis();
  const auto cols = static_cast<std::size_t>(grid->cols());

  // per-axis synthesized modulated fields, X x M
  std::vector<Eigen::MatrixXcd> F(k, Eigen::MatrixXcd(X, M));
  std::vector<cplx> buf(grid->size());
  for (int i = 0; i < k; ++i) {
    SpectralTransform tr(fields[i].basis_ptr(), grid);
    for (int j = -e.J; j <= e.J; ++j) {
      const auto mod = modulate(fields[i], TensorExpansion::theta(j), e.origin[i], e.scale[i]);
      tr.synthesize(mod.values(), buf);
      for (Eigen::Index x = 0; x < X; ++x) F[i](x, j + e.J) = buf[static_cast<std::size_t>(x)];
    }
  }

  // split the axes into two groups and contract through a weighted Gram
  // product, accumulated over row chunks of the grid
  const int half = (k + 1) / 2;
  auto khatri_rao = [&](int from, int to, Eigen::Index x0, Eigen::Index nx) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Ones(nx, 1);
    for (int i = from; i < to; ++i) {
      Eigen::MatrixXcd next(nx, out.cols() * M);
      for (Eigen::Index a = 0; a < out.cols(); ++a)
        for (int m = 0; m < M; ++m) next.col(a * M + m) = out.col(a).cwiseProduct(F[i].col(m).segment(x0, nx));
      out = std::move(next);
    }
    return out;
  };
  Eigen::Index lcols = 1, rcols = 1;
  for (int i = 0; i < half; ++i) lcols *= M;
  for (int i = half; i < k; ++i) rcols *= M;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(lcols, rcols);
  constexpr Eigen::Index kChunk = 4096;
  for (Eigen::Index x0 = 0; x0 < X; x0 += kChunk) {
    const Eigen::Index nx = std::min(kChunk, X - x0);
    Eigen::VectorXd w(nx);
    for (Eigen::Index x = 0; x < nx; ++x) w(x) = grid->weight(static_cast<std::size_t>(x0 + x) / cols);
    C.noalias() += khatri_rao(0, half, x0, nx).transpose() * (w.asDiagonal() * khatri_rao(half, k, x0, nx));
  }
  cplx total{};
  for (Eigen::Index a = 0; a < C.rows(); ++a)
    for (Eigen::Index c = 0; c < C.cols(); ++c)
      total += e.coefficients[static_cast<std::size_t>(a * C.cols() + c)] * C(a, c);
  return total;
}

struct DerivativeBound {
  std::vector<int> alpha;
  double value = 0.0;       // max |d^alpha m| prod <n_i>^{alpha_i}
  double normalized = 0.0;  // value / sup |m| on the grid
};

/// Scaled finite-difference derivatives of the symbol up to total order `order` (<= 2).
/// With `weighted` false the <n_i> factors are dropped.
inline std::vector<DerivativeBound> symbol_estimate_check(const SymbolBlock& block, int order = 2,
                                                          int points_per_axis = 9, bool weighted = true) {
  block.validate();
  if (order < 0 || order > 2) throw std::invalid_argument("symbol_estimate_check: order must be 0..2");
  const int k = block.arity();
  std::vector<std::vector<int>> alphas;
  for (int i = 0; i < k; ++i) {
    std::vector<int> a(k, 0);
    a[i] = 1;
    if (order >= 1) alphas.push_back(a);
  }
  if (order >= 2)
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        std::vector<int> a(k, 0);
        ++a[i];
        ++a[j];
        alphas.push_back(a);
      }
  std::vector<DerivativeBound> out;
  for (const auto& a : alphas) out.push_back({a, 0.0, 0.0});

  const int G = std::max(points_per_axis, 2);
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= G;
  double n[kMaxArity], sup = 0.0;
  auto f = [&](const double* x) { return block.symbol(std::span<const double>(x, static_cast<std::size_t>(k))); };
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (int i = k - 1; i >= 0; --i) {
      n[i] = block.n_of(i, block.width[i] * static_cast<double>(r % G) / (G - 1));
      r /= G;
    }
    sup = std::max(sup, std::abs(f(n)));
    for (auto& d : out) {
      int ax[2] = {-1, -1}, na = 0;
      for (int i = 0; i < k; ++i)
        for (int c = 0; c < d.alpha[i]; ++c) ax[na++] = i;
      double deriv = 0.0, weight = 1.0;
      double x[kMaxArity];
      std::copy(n, n + k, x);
      if (na == 1) {
        const int i = ax[0];
        const double h = 1e-4 * block.scale[i];
        x[i] = n[i] + h;
        const double fp = f(x);
        x[i] = n[i] - h;
        deriv = (fp - f(x)) / (2.0 * h);
        weight = std::sqrt(1.0 + n[i] * n[i]);
      } else {
        const int i = ax[0], j = ax[1];
        const double hi = 1e-3 * block.scale[i], hj = 1e-3 * block.scale[j];
        if (i == j) {
          const double f0 = f(x);
          x[i] = n[i] + hi;
          const double fp = f(x);
          x[i] = n[i] - hi;
          deriv = (fp - 2.0 * f0 + f(x)) / (hi * hi);
          weight = 1.0 + n[i] * n[i];
        } else {
          double acc = 0.0;
          for (int si : {1, -1})
            for (int sj : {1, -1}) {
              x[i] = n[i] + si * hi;
              x[j] = n[j] + sj * hj;
              acc += si * sj * f(x);
            }
          deriv = acc / (4.0 * hi * hj);
          weight = std::sqrt((1.0 + n[i] * n[i]) * (1.0 + n[j] * n[j]));
        }
      }
      d.value = std::max(d.value, std::abs(deriv) * (weighted ? weight : 1.0));
    }
  }
  for (auto& d : out) d.normalized = sup > 0.0 ? d.value / sup : d.value;
  return out;
}

/// max over the block of |d^alpha Psi| in the rescaled variables t, |alpha| <= 2.
inline double c2_norm(const SymbolBlock& block, int points_per_axis = 9) {
  SymbolBlock unit = block;
  unit.origin.assign(block.arity(), 0.0);
  unit.scale.assign(block.arity(), 1.0);
  unit.symbol = [&block](std::span<const double> t) { return block.psi(t); };
  double best = 0.0;
  const int k = block.arity();
  const int G = points_per_axis;
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= G;
  double t[kMaxArity];
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (int i = k - 1; i >= 0; --i) {
      t[i] = block.width[i] * static_cast<double>(r % G) / (G - 1);
      r /= G;
    }
    best = std::max(best, std::abs(block.psi(std::span<const double>(t, static_cast<std::size_t>(k)))));
  }
  for (const auto& d : symbol_estimate_check(unit, 2, points_per_axis, false)) best = std::max(best, d.value);
  return best;
}

// ---------------------------------------------------------------------------
// symbols

/// 1 - m(n1) / (m(n2) m(n3) m(n4)) for the I-method multiplier.
inline SymbolFn ratio_symbol(double N, double s) {
  IMultiplier m(N, s);
  return [m](std::span<const double> n) {
    double den = 1.0;
    for (std::size_t i = 1; i < n.size(); ++i) den *= m(n[i]);
    return 1.0 - m(n[0]) / den;
  };
}

/// (-2)^l / (n1^2 - n2^2 - n3^2 - n4^2)^l.
inline SymbolFn denominator_symbol(int l) {
  return [l](std::span<const double> n) {
    double D = n[0] * n[0];
    for (std::size_t i = 1; i < n.size(); ++i) D -= n[i] * n[i];
    return std::pow(-2.0, l) / std::pow(D, l);
  };
}

/// Product of the two: the symbol of the quadrilinear remainder after l integrations by parts.
inline SymbolFn bar_m_symbol(double N, double s, int l) {
  auto r = ratio_symbol(N, s);
  auto d = denominator_symbol(l);
  return [r, d](std::span<const double> n) { return r(n) * d(n); };
}

/// Block I_alpha x I_beta x [N3, 2N3] x [N4, 2N4] with I_a = [N2 + a N3, N2 + (a+1) N3).
inline SymbolBlock s1_block(double N2, double N3, double N4, int alpha, int beta, SymbolFn symbol) {
  SymbolBlock b{{N2 + alpha * N3, N2 + beta * N3, N3, N4}, {N3, N3, N3, N4}, {1.0, 1.0, 1.0, 1.0}, std::move(symbol)};
  b.validate();
  return b;
}

inline nlohmann::json to_json(const TensorExpansion& e, bool with_coefficients = false) {
  nlohmann::json j{{"arity", e.arity()},
                   {"origin", e.origin},
                   {"scale", e.scale},
                   {"width", e.width},
                   {"window", window_id(e.extension)},
                   {"extension", to_string(e.extension)},
                   {"mode_cap", e.J},
                   {"modes_per_axis", e.modes_per_axis()},
                   {"l1_mass", e.l1_mass},
                   {"sup_error", e.sup_error},
                   {"relative_error", e.relative_error},
                   {"tolerance", e.tolerance},
                   {"failed", e.failed}};
  if (with_coefficients) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& a : e.coefficients) c.push_back({a.real(), a.imag()});
    j["coefficients"] = std::move(c);
  }
  return j;
}

}  // namespace nlsm
