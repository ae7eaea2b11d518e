#pragma once

// Spectral <-> grid transforms on exact quadrature grids, alias-free
// pointwise products and correlation integrals of bandlimited fields.
//
// A grid of "degree" D integrates exactly every bandlimited integrand whose
// total bandwidth is at most D: on the torus every e^{i eta.x/lambda} with
// max|eta_j| <= D, on the sphere every polynomial of total degree <= D.

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "nlsm/errors.hpp"
#include "nlsm/fft.hpp"
#include "nlsm/legendre.hpp"
#include "nlsm/spectra.hpp"

namespace nlsm {

/// Largest number of points per axis any grid may use.
inline constexpr int kMaxGridPoints = 8192;

class QuadratureGrid {
 public:
  /// Grid on M_lambda exact for total bandwidth `degree`.
  QuadratureGrid(Manifold manifold, double lambda, int degree) : manifold_(manifold), scale_(lambda), degree_(degree) {
    if (degree < 0) throw std::invalid_argument("QuadratureGrid: negative degree");
    if (manifold == Manifold::kTorus) {
      const int need = degree + 1;
      if (need > kMaxGridPoints)
        throw RefusalError("grid budget exceeded: torus grid needs " + std::to_string(need) +
                           " points per axis (max " + std::to_string(kMaxGridPoints) + ")");
      n0_ = n1_ = fft::good_size(need);
    } else {
      const int ntheta = (degree + 2) / 2;  // ceil((D + 1) / 2)
      const int nphi = degree + 1;
      if (nphi > kMaxGridPoints)
        throw RefusalError("grid budget exceeded: sphere grid needs " + std::to_string(nphi) +
                           " longitude points (max " + std::to_string(kMaxGridPoints) + ")");
      n0_ = std::max(ntheta, 1);
      n1_ = fft::good_size(std::max(nphi, 1));
      auto rule = gauss_legendre(static_cast<std::size_t>(n0_));
      cos_theta_ = std::move(rule.nodes);
      theta_weights_ = std::move(rule.weights);
    }
  }

  Manifold manifold() const noexcept { return manifold_; }
  double scale() const noexcept { return scale_; }
  int degree() const noexcept { return degree_; }
  /// Torus: points per axis. Sphere: colatitude nodes.
  int rows() const noexcept { return n0_; }
  /// Torus: points per axis. Sphere: longitude nodes.
  int cols() const noexcept { return n1_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n0_) * static_cast<std::size_t>(n1_); }

  const std::vector<double>& cos_theta() const noexcept { return cos_theta_; }

  /// Quadrature weight of node (row, col).
  double weight(std::size_t row) const noexcept {
    if (manifold_ == Manifold::kTorus) {
      const double h = 2.0 * std::numbers::pi * scale_ / n0_;
      return h * h;
    }
    return theta_weights_[row] * (2.0 * std::numbers::pi / n1_) * scale_ * scale_;
  }

  /// Node coordinates: torus (x1, x2) in [0, 2 pi lambda)^2, sphere (theta, phi) on the unit sphere.
  std::pair<double, double> node(std::size_t row, std::size_t col) const {
    if (manifold_ == Manifold::kTorus) {
      const double h = 2.0 * std::numbers::pi * scale_;
      return {h * static_cast<double>(row) / n0_, h * static_cast<double>(col) / n1_};
    }
    return {std::acos(cos_theta_[row]), 2.0 * std::numbers::pi * static_cast<double>(col) / n1_};
  }

  double total_weight() const {
    double s = 0.0;
    for (int i = 0; i < n0_; ++i) s += weight(static_cast<std::size_t>(i)) * n1_;
    return s;
  }

 private:
  Manifold manifold_;
  double scale_;
  int degree_;
  int n0_ = 0;
  int n1_ = 0;
  std::vector<double> cos_theta_;
  std::vector<double> theta_weights_;
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

/// Cached grid keyed by (manifold, lambda, degree).
inline GridPtr grid_for(Manifold manifold, double lambda, int degree) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, int>, GridPtr> cache;
  const auto key = std::make_tuple(static_cast<int>(manifold), lambda, degree);
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto g = std::make_shared<const QuadratureGrid>(manifold, lambda, degree);
  cache.emplace(key, g);
  return g;
}

struct GridField {
  GridPtr grid;
  std::vector<cplx> values;  // row-major, rows() x cols()

  GridField() = default;
  explicit GridField(GridPtr g) : grid(std::move(g)), values(grid->size()) {}
  GridField(GridPtr g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->size()) throw std::invalid_argument("GridField: length does not match grid");
  }
};

/// Quadrature of f over M_lambda.
inline cplx integrate(const GridField& f) {
  const auto& g = *f.grid;
  cplx total{};
  const auto cols = static_cast<std::size_t>(g.cols());
  for (std::size_t r = 0; r < static_cast<std::size_t>(g.rows()); ++r) {
    cplx row{};
    for (std::size_t c = 0; c < cols; ++c) row += f.values[r * cols + c];
    total += g.weight(r) * row;
  }
  return total;
}

/// Synthesis and analysis between one basis and one grid. Holds the index
/// maps and (sphere) the Legendre table, so repeated transforms are cheap.
class SpectralTransform {
 public:
  SpectralTransform(BasisPtr basis, GridPtr grid) : basis_(std::move(basis)), grid_(std::move(grid)) {
    const auto& b = *basis_;
    const auto& g = *grid_;
    if (b.manifold() != g.manifold() || b.scale() != g.scale())
      throw MismatchError("transform: basis and grid live on different manifolds or scales");
    const int lmax = b.extent();
    if (b.manifold() == Manifold::kTorus) {
      const int n = g.rows();
      slot_.resize(b.size());
      for (std::size_t k = 0; k < b.size(); ++k) {
        const auto l = b[k].label;
        const int i = ((l.a % n) + n) % n;
        const int j = ((l.b % n) + n) % n;
        slot_[k] = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
      }
    } else {
      legendre_ = LegendreTable(g.cos_theta(), lmax);
      // dense (m, l) -> basis index map
      dense_.assign(static_cast<std::size_t>(2 * lmax + 1) * static_cast<std::size_t>(lmax + 1), -1);
      for (std::size_t k = 0; k < b.size(); ++k) {
        const auto l = b[k].label;
        dense_[dense_index(l.b, l.a)] = static_cast<std::ptrdiff_t>(k);
      }
    }
  }

  const BasisPtr& basis() const noexcept { return basis_; }
  const GridPtr& grid() const noexcept { return grid_; }

  void synthesize(std::span<const cplx> coeffs, std::span<cplx> out) const {
    const auto& b = *basis_;
    const auto& g = *grid_;
    std::fill(out.begin(), out.end(), cplx{});
    if (b.manifold() == Manifold::kTorus) {
      const double norm = b.torus_normalization();
      for (std::size_t k = 0; k < coeffs.size(); ++k) out[slot_[k]] += coeffs[k] * norm;
      fft::transform_2d(out, g.rows(), g.cols(), fft::Direction::kBackward);
      return;
    }
    const int lmax = b.extent();
    const int nphi = g.cols();
    const double inv_scale = 1.0 / b.scale();
    for (std::size_t r = 0; r < static_cast<std::size_t>(g.rows()); ++r) {
      cplx* row = out.data() + r * static_cast<std::size_t>(nphi);
      for (int m = -lmax; m <= lmax; ++m) {
        const int am = std::abs(m);
        const double* p = legendre_.column(r, am);
        const double phase = (m < 0 && (am % 2 == 1)) ? -1.0 : 1.0;
        cplx acc{};
        for (int l = am; l <= lmax; ++l) {
          const auto idx = dense_[dense_index(m, l)];
          if (idx >= 0) acc += coeffs[static_cast<std::size_t>(idx)] * p[l - am];
        }
        row[((m % nphi) + nphi) % nphi] += acc * phase * inv_scale;
      }
    }
    fft::transform_rows(out, nphi, g.rows(), fft::Direction::kBackward);
  }

  /// c_k = sum_j w_j conj(e_k(x_j)) f(x_j). `scratch` must hold grid().size()
  /// entries. Exact when the grid degree covers band(f) + basis extent; the
  /// caller is responsible for that here.
  void analyze(std::span<const cplx> values, std::span<cplx> coeffs, std::span<cplx> scratch) const {
    const auto& b = *basis_;
    const auto& g = *grid_;
    std::copy(values.begin(), values.end(), scratch.begin());
    if (b.manifold() == Manifold::kTorus) {
      fft::transform_2d(scratch, g.rows(), g.cols(), fft::Direction::kForward);
      const double n = g.rows();
      const double factor = 2.0 * std::numbers::pi * b.scale() / (n * n);
      for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = scratch[slot_[k]] * factor;
      return;
    }
    const int lmax = b.extent();
    const int nphi = g.cols();
    fft::transform_rows(scratch, nphi, g.rows(), fft::Direction::kForward);
    std::fill(coeffs.begin(), coeffs.end(), cplx{});
    for (std::size_t r = 0; r < static_cast<std::size_t>(g.rows()); ++r) {
      const cplx* row = scratch.data() + r * static_cast<std::size_t>(nphi);
      const double w = g.weight(r) / b.scale();
      for (int m = -lmax; m <= lmax; ++m) {
        const int am = std::abs(m);
        const double* p = legendre_.column(r, am);
        const double phase = (m < 0 && (am % 2 == 1)) ? -1.0 : 1.0;
        const cplx fm = row[((m % nphi) + nphi) % nphi] * (w * phase);
        for (int l = am; l <= lmax; ++l) {
          const auto idx = dense_[dense_index(m, l)];
          if (idx >= 0) coeffs[static_cast<std::size_t>(idx)] += fm * p[l - am];
        }
      }
    }
  }

  GridField synthesize(const SpectralCoeffs& c) const {
    check_basis(c);
    GridField f(grid_);
    synthesize(c.values(), f.values);
    return f;
  }

  /// Checked analysis of a field of unknown band: requires degree >= 2 * extent.
  SpectralCoeffs analyze(const GridField& f) const {
    const int need = 2 * basis_->extent();
    if (grid_->degree() < need)
      throw RefusalError("analyze: grid exactness degree " + std::to_string(grid_->degree()) +
                         " is below the required degree " + std::to_string(need));
    if (f.grid != grid_ && (f.grid->manifold() != grid_->manifold() || f.grid->scale() != grid_->scale() ||
                            f.grid->size() != grid_->size()))
      throw MismatchError("analyze: field lives on a different grid");
    SpectralCoeffs c(basis_);
    std::vector<cplx> scratch(grid_->size());
    analyze(f.values, c.values(), scratch);
    return c;
  }

 private:
  void check_basis(const SpectralCoeffs& c) const {
    if (c.basis_ptr() != basis_ && !c.basis().identical(*basis_))
      throw MismatchError("transform: coefficients live on a different basis");
  }
  std::size_t dense_index(int m, int l) const {
    const int lmax = basis_->extent();
    return static_cast<std::size_t>(m + lmax) * static_cast<std::size_t>(lmax + 1) + static_cast<std::size_t>(l);
  }

  BasisPtr basis_;
  GridPtr grid_;
  std::vector<std::size_t> slot_;
  LegendreTable legendre_;
  std::vector<std::ptrdiff_t> dense_;
};

inline void check_same_space(const SpectralBasis& a, const SpectralBasis& b) {
  if (!a.same_space(b)) throw MismatchError("inputs live on different manifolds or scales");
}

/// Pointwise evaluation of sum c_k e_k on the grid.
inline GridField synthesize(const SpectralCoeffs& c, const GridPtr& grid) {
  return SpectralTransform(c.basis_ptr(), grid).synthesize(c);
}

/// Quadrature projection of f onto the basis.
inline SpectralCoeffs analyze(const GridField& f, const BasisPtr& basis) {
  return SpectralTransform(basis, f.grid).analyze(f);
}

/// Alias-free coefficients of the pointwise product of up to four fields,
/// restricted to the target basis.
inline SpectralCoeffs pointwise_product(std::span<const SpectralCoeffs> factors, const BasisPtr& target) {
  if (factors.empty() || factors.size() > 4)
    throw std::invalid_argument("pointwise_product: between 1 and 4 factors supported");
  int degree = target->extent();
  for (const auto& f : factors) {
    check_same_space(f.basis(), *target);
    degree += f.support_extent();
  }
  auto grid = grid_for(target->manifold(), target->scale(), degree);
  GridField prod(grid);
  std::fill(prod.values.begin(), prod.values.end(), cplx{1.0, 0.0});
  std::vector<cplx> buf(grid->size());
  for (const auto& f : factors) {
    SpectralTransform(f.basis_ptr(), grid).synthesize(f.values(), buf);
    for (std::size_t j = 0; j < buf.size(); ++j) prod.values[j] *= buf[j];
  }
  SpectralCoeffs out(target);
  SpectralTransform(target, grid).analyze(prod.values, out.values(), buf);
  return out;
}

/// Exact quadrature of the product of up to four bandlimited fields over M_lambda.
inline cplx correlation_integral(std::span<const SpectralCoeffs> factors) {
  if (factors.empty() || factors.size() > 4)
    throw std::invalid_argument("correlation_integral: between 1 and 4 factors supported");
  int degree = 0;
  for (const auto& f : factors) {
    check_same_space(f.basis(), factors[0].basis());
    degree += f.support_extent();
  }
  auto grid = grid_for(factors[0].basis().manifold(), factors[0].basis().scale(), degree);
  GridField prod(grid);
  std::fill(prod.values.begin(), prod.values.end(), cplx{1.0, 0.0});
  std::vector<cplx> buf(grid->size());
  for (const auto& f : factors) {
    SpectralTransform(f.basis_ptr(), grid).synthesize(f.values(), buf);
    for (std::size_t j = 0; j < buf.size(); ++j) prod.values[j] *= buf[j];
  }
  return integrate(prod);
}

/// ||f||_{L^p(M_lambda)} by quadrature; exact for even integer p.
inline double lp_norm(const SpectralCoeffs& c, double p) {
  const int mult = static_cast<int>(std::ceil(p));
  const int degree = mult * c.support_extent();
  auto grid = grid_for(c.basis().manifold(), c.basis().scale(), degree);
  const auto f = synthesize(c, grid);
  const auto cols = static_cast<std::size_t>(grid->cols());
  double total = 0.0;
  for (std::size_t r = 0; r < static_cast<std::size_t>(grid->rows()); ++r) {
    double row = 0.0;
    for (std::size_t k = 0; k < cols; ++k) row += std::pow(std::abs(f.values[r * cols + k]), p);
    total += grid->weight(r) * row;
  }
  return std::pow(total, 1.0 / p);
}

struct ScalingSides {
  double lhs = 0.0;  // ||f||_{L^p(M_lambda)}
  double rhs = 0.0;  // lambda^{2/p} ||f~||_{L^p(M)}, f~(y) = f(lambda y)
};

/// Both sides of the L^p dilation identity, each from its own quadrature grid.
inline ScalingSides lp_scaling_check(const SpectralCoeffs& f, int p) {
  if (p != 2 && p != 4)
    throw RefusalError("lp_scaling_check: exact quadrature is only available for p in {2, 4}");
  const double lam = f.basis().scale();
  ScalingSides out;
  out.lhs = lp_norm(f, p);
  out.rhs = std::pow(lam, 2.0 / p) * lp_norm(dilate_to_base(f), p);
  return out;
}

}  // namespace nlsm
