#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nlsm {

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
inline GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  const auto nn = static_cast<double>(n);
  // returns P_n(x) and writes P_n'(x)
  auto legendre = [n, nn](double x, double& deriv) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const auto kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    deriv = nn * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  GaussLegendreRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Orthonormal associated Legendre functions Pbar_l^m(cos theta), m >= 0,
/// with Condon-Shortley phase, normalised so that
/// Y_l^m(theta, phi) = Pbar_l^m(cos theta) e^{i m phi} has unit L^2(S^2) norm.
/// Values for node i are stored contiguously in (m, l) order.
class LegendreTable {
 public:
  LegendreTable() = default;
  LegendreTable(const std::vector<double>& x, int lmax) : lmax_(lmax), npts_(x.size()) {
    if (lmax < 0) throw std::invalid_argument("LegendreTable: negative degree");
    offsets_.resize(static_cast<std::size_t>(lmax) + 2);
    std::size_t off = 0;
    for (int m = 0; m <= lmax; ++m) {
      offsets_[static_cast<std::size_t>(m)] = off;
      off += static_cast<std::size_t>(lmax - m + 1);
    }
    per_node_ = off;
    values_.assign(per_node_ * npts_, 0.0);
    for (std::size_t i = 0; i < npts_; ++i) fill(x[i], &values_[i * per_node_]);
  }

  int lmax() const noexcept { return lmax_; }
  std::size_t points() const noexcept { return npts_; }

  double operator()(std::size_t node, int l, int m) const {
    return values_[node * per_node_ + offsets_[static_cast<std::size_t>(m)] + static_cast<std::size_t>(l - m)];
  }
  /// Pointer to Pbar_m^m, Pbar_{m+1}^m, ..., Pbar_lmax^m at the node.
  const double* column(std::size_t node, int m) const {
    return &values_[node * per_node_ + offsets_[static_cast<std::size_t>(m)]];
  }

 private:
  void fill(double x, double* out) const {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (int m = 0; m <= lmax_; ++m) {
      if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      double* col = out + offsets_[static_cast<std::size_t>(m)];
      col[0] = pmm;
      if (m + 1 <= lmax_) col[1] = std::sqrt(2.0 * m + 3.0) * x * pmm;
      for (int l = m + 2; l <= lmax_; ++l) {
        const double ll = l, mm = m;
        const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
        const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
        col[l - m] = a * (x * col[l - m - 1] - b * col[l - m - 2]);
      }
    }
  }

  int lmax_ = -1;
  std::size_t npts_ = 0;
  std::size_t per_node_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
};

}  // namespace nlsm
