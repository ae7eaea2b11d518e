#pragma once

// Exact Laplace-Beltrami eigenbases of the flat square torus (side 2*pi) and
// the unit round sphere, dilated by a scale factor lambda, together with
// coefficient vectors, spectral projections and Sobolev norms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlsm/errors.hpp"

namespace nlsm {

using cplx = std::complex<double>;

enum class Manifold { kTorus, kSphere };

inline const char* to_string(Manifold m) { return m == Manifold::kTorus ? "torus" : "sphere"; }

inline Manifold manifold_from_string(const std::string& s) {
  if (s == "torus") return Manifold::kTorus;
  if (s == "sphere") return Manifold::kSphere;
  throw std::invalid_argument("unknown manifold '" + s + "' (expected torus|sphere)");
}

/// Volume of the base manifold (scale 1).
inline double base_volume(Manifold m) {
  return m == Manifold::kTorus ? 4.0 * std::numbers::pi * std::numbers::pi : 4.0 * std::numbers::pi;
}

// Torus: (a, b) = lattice point xi. Sphere: (a, b) = (l, m) with |m| <= l.
struct ModeLabel {
  int a = 0;
  int b = 0;
  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
  friend auto operator<=>(const ModeLabel&, const ModeLabel&) = default;
};

struct Mode {
  std::size_t index = 0;
  long base_eigenvalue = 0;  // |xi|^2 or l(l+1) on the unit-scale manifold
  double eigenvalue = 0.0;   // base_eigenvalue / lambda^2
  double frequency = 0.0;    // sqrt(eigenvalue)
  ModeLabel label;
};

/// Default hard cap on the number of modes a basis may hold.
inline constexpr std::size_t kDefaultModeCap = std::size_t{1} << 21;

class SpectralBasis;
using BasisPtr = std::shared_ptr<const SpectralBasis>;

/// Immutable enumeration of eigenmodes with rescaled frequency <= cutoff on
/// M_lambda, ordered by (eigenvalue, label).
class SpectralBasis {
 public:
  /// Every mode with base frequency <= cutoff * lambda.
  static BasisPtr build(Manifold manifold, double cutoff, double lambda,
                        std::size_t mode_cap = kDefaultModeCap) {
    if (!(cutoff >= 1.0)) throw std::invalid_argument("build_basis: cutoff must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("build_basis: lambda must be > 0");
    return build_from_base_radius(manifold, cutoff * lambda, lambda, mode_cap);
  }

  /// Same label set, new scale. Mode membership is decided by the base
  /// radius, so no boundary mode is lost to rounding.
  BasisPtr rescaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescaled: lambda must be > 0");
    return build_from_base_radius(manifold_, base_radius_, lambda, kDefaultModeCap);
  }

  Manifold manifold() const noexcept { return manifold_; }
  double scale() const noexcept { return scale_; }
  double cutoff() const noexcept { return base_radius_ / scale_; }
  double base_radius() const noexcept { return base_radius_; }
  std::size_t size() const noexcept { return modes_.size(); }
  std::span<const Mode> modes() const noexcept { return modes_; }
  const Mode& operator[](std::size_t i) const { return modes_[i]; }
  double volume() const noexcept { return scale_ * scale_ * base_volume(manifold_); }

  /// Largest |xi_j| component (torus) or largest degree l (sphere).
  int extent() const noexcept { return extent_; }

  /// Normalisation of the torus eigenfunction e^{i xi.x/lambda} / (2 pi lambda).
  double torus_normalization() const noexcept { return 1.0 / (2.0 * std::numbers::pi * scale_); }

  std::ptrdiff_t find(ModeLabel label) const {
    auto it = lookup_.find(key(label));
    return it == lookup_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }

  /// Label of the mode whose eigenfunction is the complex conjugate of this
  /// mode's eigenfunction (up to the phase returned by conjugation_phase).
  static ModeLabel conjugate_label(Manifold m, ModeLabel l) {
    return m == Manifold::kTorus ? ModeLabel{-l.a, -l.b} : ModeLabel{l.a, -l.b};
  }
  static double conjugation_phase(Manifold m, ModeLabel l) {
    if (m == Manifold::kTorus) return 1.0;
    return (l.b % 2 == 0) ? 1.0 : -1.0;
  }

  bool same_space(const SpectralBasis& o) const noexcept {
    return manifold_ == o.manifold_ && scale_ == o.scale_;
  }
  bool identical(const SpectralBasis& o) const noexcept {
    return same_space(o) && hash_ == o.hash_ && modes_.size() == o.modes_.size();
  }

  std::uint64_t content_hash() const noexcept { return hash_; }

  std::string hash_hex() const {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << hash_;
    return os.str();
  }

  nlohmann::json descriptor() const {
    return {{"manifold", to_string(manifold_)},
            {"lambda", scale_},
            {"cutoff", cutoff()},
            {"modes", modes_.size()},
            {"hash", hash_hex()}};
  }

 private:
  SpectralBasis() = default;

  static std::uint64_t key(ModeLabel l) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(l.a)) << 32) |
           static_cast<std::uint32_t>(l.b);
  }

  static BasisPtr build_from_base_radius(Manifold manifold, double radius, double lambda,
                                         std::size_t mode_cap) {
    auto basis = std::shared_ptr<SpectralBasis>(new SpectralBasis());
    basis->manifold_ = manifold;
    basis->scale_ = lambda;
    basis->base_radius_ = radius;
    const double r2 = radius * radius * (1.0 + 1e-12);
    auto& modes = basis->modes_;

    if (manifold == Manifold::kTorus) {
      const int r = static_cast<int>(std::floor(std::sqrt(r2)));
      std::size_t count = 0;
      for (int a = -r; a <= r; ++a) {
        const long rem = static_cast<long>(std::floor(r2)) - static_cast<long>(a) * a;
        count += 2 * static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(rem)))) + 1;
      }
      if (count > mode_cap) {
        throw RefusalError("build_basis: " + std::to_string(count) + " modes exceed the cap of " +
                           std::to_string(mode_cap));
      }
      modes.reserve(count);
      for (int a = -r; a <= r; ++a) {
        for (int b = -r; b <= r; ++b) {
          const long e = static_cast<long>(a) * a + static_cast<long>(b) * b;
          if (static_cast<double>(e) <= r2) modes.push_back({0, e, 0.0, 0.0, {a, b}});
        }
      }
      basis->extent_ = r;
    } else {
      int lmax = 0;
      while (static_cast<double>((lmax + 1) * (lmax + 2)) <= r2) ++lmax;
      const std::size_t count = static_cast<std::size_t>(lmax + 1) * (lmax + 1);
      if (count > mode_cap) {
        throw RefusalError("build_basis: " + std::to_string(count) + " modes exceed the cap of " +
                           std::to_string(mode_cap));
      }
      modes.reserve(count);
      for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) modes.push_back({0, static_cast<long>(l) * (l + 1), 0.0, 0.0, {l, m}});
      basis->extent_ = lmax;
    }

    std::sort(modes.begin(), modes.end(), [](const Mode& x, const Mode& y) {
      return x.base_eigenvalue != y.base_eigenvalue ? x.base_eigenvalue < y.base_eigenvalue
                                                    : x.label < y.label;
    });
    const double inv_l2 = 1.0 / (lambda * lambda);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](const void* p, std::size_t n) {
      const auto* bytes = static_cast<const unsigned char*>(p);
      for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
      }
    };
    const int kind = manifold == Manifold::kTorus ? 0 : 1;
    mix(&kind, sizeof kind);
    mix(&lambda, sizeof lambda);
    basis->lookup_.reserve(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
      Mode& md = modes[i];
      md.index = i;
      md.eigenvalue = static_cast<double>(md.base_eigenvalue) * inv_l2;
      md.frequency = std::sqrt(md.eigenvalue);
      basis->lookup_.emplace(key(md.label), i);
      mix(&md.label.a, sizeof md.label.a);
      mix(&md.label.b, sizeof md.label.b);
    }
    basis->hash_ = h;
    return basis;
  }

  Manifold manifold_ = Manifold::kTorus;
  double scale_ = 1.0;
  double base_radius_ = 1.0;
  int extent_ = 0;
  std::vector<Mode> modes_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
  std::uint64_t hash_ = 0;
};

inline BasisPtr build_basis(Manifold manifold, double cutoff, double lambda,
                            std::size_t mode_cap = kDefaultModeCap) {
  return SpectralBasis::build(manifold, cutoff, lambda, mode_cap);
}

/// Coefficients of a field in the L^2(M_lambda)-orthonormal eigenbasis.
class SpectralCoeffs {
 public:
  SpectralCoeffs() = default;
  explicit SpectralCoeffs(BasisPtr basis)
      : basis_(std::move(basis)), values_(basis_ ? basis_->size() : 0) {}
  SpectralCoeffs(BasisPtr basis, std::vector<cplx> values)
      : basis_(std::move(basis)), values_(std::move(values)) {
    if (!basis_ || values_.size() != basis_->size())
      throw std::invalid_argument("SpectralCoeffs: length does not match basis");
  }

  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  const SpectralBasis& basis() const { return *basis_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  /// Coefficient by label; zero when the label is not in the basis.
  cplx at(ModeLabel label) const {
    const auto i = basis_->find(label);
    return i < 0 ? cplx{} : values_[static_cast<std::size_t>(i)];
  }
  void set(ModeLabel label, cplx v) {
    const auto i = basis_->find(label);
    if (i < 0) throw std::out_of_range("SpectralCoeffs::set: label not in basis");
    values_[static_cast<std::size_t>(i)] = v;
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  /// Largest frequency carrying a nonzero coefficient (0 for the zero field).
  double max_frequency() const {
    double f = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] != cplx{}) f = std::max(f, (*basis_)[i].frequency);
    return f;
  }

  /// Torus: max |xi_j| over nonzero coefficients; sphere: max degree.
  int support_extent() const {
    int e = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] == cplx{}) continue;
      const auto& l = (*basis_)[i].label;
      e = std::max(e, basis_->manifold() == Manifold::kTorus ? std::max(std::abs(l.a), std::abs(l.b)) : l.a);
    }
    return e;
  }

  SpectralCoeffs& operator+=(const SpectralCoeffs& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  SpectralCoeffs& operator-=(const SpectralCoeffs& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  SpectralCoeffs& operator*=(cplx a) {
    for (auto& v : values_) v *= a;
    return *this;
  }
  friend SpectralCoeffs operator+(SpectralCoeffs a, const SpectralCoeffs& b) { return a += b; }
  friend SpectralCoeffs operator-(SpectralCoeffs a, const SpectralCoeffs& b) { return a -= b; }
  friend SpectralCoeffs operator*(cplx s, SpectralCoeffs a) { return a *= s; }

  void check_same(const SpectralCoeffs& o) const {
    if (!basis_ || !o.basis_ || (basis_ != o.basis_ && !basis_->identical(*o.basis_)))
      throw MismatchError("coefficient vectors live on different bases");
  }

 private:
  BasisPtr basis_;
  std::vector<cplx> values_;
};

/// L^2 inner product <a, b> = sum a_k conj(b_k).
inline cplx inner(const SpectralCoeffs& a, const SpectralCoeffs& b) {
  a.check_same(b);
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

/// Coefficients of conj(u). Torus: xi -> -xi; sphere: (l,m) -> (l,-m) with (-1)^m.
inline SpectralCoeffs conjugate(const SpectralCoeffs& c) {
  SpectralCoeffs out(c.basis_ptr());
  const auto& basis = c.basis();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto label = basis[i].label;
    const auto j = basis.find(SpectralBasis::conjugate_label(basis.manifold(), label));
    if (j < 0) throw MismatchError("conjugate: basis is not closed under conjugation");
    out[i] = SpectralBasis::conjugation_phase(basis.manifold(), label) * std::conj(c[static_cast<std::size_t>(j)]);
  }
  return out;
}

/// Keeps the coefficients whose frequency lies in [lo, hi).
inline SpectralCoeffs project_interval(const SpectralCoeffs& c, double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi)) throw std::invalid_argument("project_interval: need 0 <= a < b");
  SpectralCoeffs out(c.basis_ptr());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double n = c.basis()[i].frequency;
    if (n >= lo && n < hi) out[i] = c[i];
  }
  return out;
}

/// Dyadic Littlewood-Paley piece: P_1 = [0,2), P_N = [N,2N) for N = 2,4,...
inline SpectralCoeffs dyadic_projection(const SpectralCoeffs& c, double N) {
  return N <= 1.0 ? project_interval(c, 0.0, 2.0) : project_interval(c, N, 2.0 * N);
}

/// Dyadic scales 1,2,4,... needed to cover every mode of the basis.
inline std::vector<double> dyadic_scales(const SpectralBasis& basis) {
  std::vector<double> out{1.0};
  double top = 0.0;
  for (const auto& m : basis.modes()) top = std::max(top, m.frequency);
  for (double N = 2.0; N <= top; N *= 2.0) out.push_back(N);
  return out;
}

/// (sum (1 + nu_k)^s |c_k|^2)^{1/2}.
inline double sobolev_norm(const SpectralCoeffs& c, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == cplx{}) continue;
    acc += std::pow(1.0 + c.basis()[i].eigenvalue, s) * std::norm(c[i]);
  }
  return std::sqrt(acc);
}

/// Homogeneous norm (sum_{nu_k > 0} nu_k^s |c_k|^2)^{1/2}; the zero mode contributes 0.
inline double homogeneous_norm(const SpectralCoeffs& c, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double nu = c.basis()[i].eigenvalue;
    if (nu > 0.0) acc += std::pow(nu, s) * std::norm(c[i]);
  }
  return std::sqrt(acc);
}

}  // namespace nlsm

namespace nlsm {

/// Pointwise pullback to the unit-scale manifold: u~(y) = u(lambda y).
/// In coefficients this divides by lambda (eigenfunctions on M_lambda carry 1/lambda).
inline SpectralCoeffs dilate_to_base(const SpectralCoeffs& u) {
  const double lam = u.basis().scale();
  SpectralCoeffs out(u.basis().rescaled(1.0));
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] / lam;
  return out;
}

/// Inverse of dilate_to_base: u(x) = u~(x / lambda) on M_lambda.
inline SpectralCoeffs dilate_from_base(const SpectralCoeffs& base, double lambda) {
  SpectralCoeffs out(base.basis().rescaled(lambda));
  const double s = lambda / base.basis().scale();
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] * s;
  return out;
}

}  // namespace nlsm
