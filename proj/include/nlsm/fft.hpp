#pragma once

// Thin RAII layer over FFTW3. Plans are created once per shape under a
// global lock (FFTW planning is not thread-safe) and executed through the
// new-array interface, which is.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <tuple>

#include <fftw3.h>

namespace nlsm::fft {

enum class Direction { kForward = FFTW_FORWARD, kBackward = FFTW_BACKWARD };

namespace detail {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const noexcept {
    if (p) fftw_destroy_plan(p);
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// (rank-tag, n0, n1, howmany, direction)
using PlanKey = std::tuple<int, int, int, int, int>;

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

inline fftw_plan cached_plan(const PlanKey& key) {
  static std::map<PlanKey, PlanHandle> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.get();
  const auto [rank, n0, n1, howmany, dir] = key;
  const std::size_t len = static_cast<std::size_t>(n0) * static_cast<std::size_t>(rank == 2 ? n1 : 1) *
                          static_cast<std::size_t>(howmany);
  auto* buf = fftw_alloc_complex(len);
  fftw_plan p = nullptr;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (rank == 2) {
    p = fftw_plan_dft_2d(n0, n1, buf, buf, dir, flags);
  } else {
    int n[] = {n0};
    p = fftw_plan_many_dft(1, n, howmany, buf, nullptr, 1, n0, buf, nullptr, 1, n0, dir, flags);
  }
  fftw_free(buf);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(key, PlanHandle(p));
  return p;
}

inline fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace detail

/// In-place unnormalised 2-D transform of a row-major n0 x n1 array.
/// Forward computes sum_j x_j e^{-2 pi i jk/n}; backward uses e^{+...}.
inline void transform_2d(std::span<std::complex<double>> data, int n0, int n1, Direction dir) {
  if (data.size() != static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1))
    throw std::invalid_argument("transform_2d: size mismatch");
  fftw_plan p = detail::cached_plan({2, n0, n1, 1, static_cast<int>(dir)});
  fftw_execute_dft(p, detail::as_fftw(data.data()), detail::as_fftw(data.data()));
}

/// In-place unnormalised transforms of `howmany` contiguous rows of length n.
inline void transform_rows(std::span<std::complex<double>> data, int n, int howmany, Direction dir) {
  if (data.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(howmany))
    throw std::invalid_argument("transform_rows: size mismatch");
  fftw_plan p = detail::cached_plan({1, n, 1, howmany, static_cast<int>(dir)});
  fftw_execute_dft(p, detail::as_fftw(data.data()), detail::as_fftw(data.data()));
}

/// Smallest integer >= n whose prime factors are all in {2, 3, 5, 7}.
inline int good_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace nlsm::fft
