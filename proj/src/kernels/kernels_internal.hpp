#pragma once

#include "swd/kernels.hpp"

namespace swd::kernels {

struct Ops {
  Backend id;
  void (*count_pair_classes)(const double*, const double*, std::size_t,
                             PairTally&);
  void (*min_max)(const double*, std::size_t, double&, double&);
  void (*affine_map)(const double*, std::size_t, double, double, double,
                     double*);
  void (*moving_average)(const double*, std::size_t, std::size_t, double*);
};

const Ops& scalar_ops() noexcept;
#if defined(SWD_HAVE_AVX2)
const Ops& avx2_ops() noexcept;
#endif

/// Shared single-pair classifier; also the tail path of the SIMD kernels.
inline void classify_pair(double xi, double yi, double xj, double yj,
                          PairTally& t) {
  const bool ex = (xi == xj);
  const bool ey = (yi == yj);
  if (ex && ey) {
    ++t.ties_xy;
  } else if (ex) {
    ++t.ties_x;
  } else if (ey) {
    ++t.ties_y;
  } else if ((xi < xj) == (yi < yj)) {
    ++t.concordant;
  } else {
    ++t.discordant;
  }
}

/// Expanding-window head of the moving average (outputs 0 .. min(n,k-1)-1).
/// Kept here so the scalar and SIMD paths share the exact summation order.
inline void moving_average_head(const double* x, std::size_t n, std::size_t k,
                                double* out) {
  const std::size_t head = (k - 1 < n) ? k - 1 : n;
  for (std::size_t i = 0; i < head; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += x[j];
    out[i] = s / static_cast<double>(i + 1);
  }
}

/// One steady-state output: left-to-right sum over [i-k+1, i], divided by k.
inline double moving_average_at(const double* x, std::size_t i,
                                std::size_t k) {
  const std::size_t lo = i + 1 - k;
  double s = 0.0;
  for (std::size_t j = lo; j <= i; ++j) s += x[j];
  return s / static_cast<double>(k);
}

}  // namespace swd::kernels
