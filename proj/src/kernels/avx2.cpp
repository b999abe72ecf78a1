// AVX2 variants of the inner-loop kernels. Each routine performs the exact
// same floating-point operations in the exact same order as its scalar
// reference (per output element), so results are bit-identical; the
// equivalence tests assert exact equality, not a tolerance. Compiled with
// -mavx2 -ffp-contract=off; selected at runtime by the dispatcher.

#include "kernels_internal.hpp"

#if defined(SWD_HAVE_AVX2)

#include <immintrin.h>

namespace swd::kernels {
namespace {

inline int mask_count(__m256d m) {
  return __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(m)));
}

void count_pair_classes_avx2(const double* x, const double* y, std::size_t n,
                             PairTally& out) {
  PairTally t;
  std::uint64_t con = 0, dis = 0, tx = 0, ty = 0, txy = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xs = x[i];
    const double ys = y[i];
    const __m256d xi = _mm256_set1_pd(xs);
    const __m256d yi = _mm256_set1_pd(ys);
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      const __m256d xj = _mm256_loadu_pd(x + j);
      const __m256d yj = _mm256_loadu_pd(y + j);
      const __m256d x_lt = _mm256_cmp_pd(xi, xj, _CMP_LT_OQ);
      const __m256d x_gt = _mm256_cmp_pd(xi, xj, _CMP_GT_OQ);
      const __m256d y_lt = _mm256_cmp_pd(yi, yj, _CMP_LT_OQ);
      const __m256d y_gt = _mm256_cmp_pd(yi, yj, _CMP_GT_OQ);
      const __m256d x_eq = _mm256_cmp_pd(xi, xj, _CMP_EQ_OQ);
      const __m256d y_eq = _mm256_cmp_pd(yi, yj, _CMP_EQ_OQ);
      const __m256d c = _mm256_or_pd(_mm256_and_pd(x_lt, y_lt),
                                     _mm256_and_pd(x_gt, y_gt));
      const __m256d d = _mm256_or_pd(_mm256_and_pd(x_lt, y_gt),
                                     _mm256_and_pd(x_gt, y_lt));
      con += mask_count(c);
      dis += mask_count(d);
      txy += mask_count(_mm256_and_pd(x_eq, y_eq));
      tx += mask_count(_mm256_andnot_pd(y_eq, x_eq));
      ty += mask_count(_mm256_andnot_pd(x_eq, y_eq));
    }
    for (; j < n; ++j) classify_pair(xs, ys, x[j], y[j], t);
  }
  t.concordant += con;
  t.discordant += dis;
  t.ties_x += tx;
  t.ties_y += ty;
  t.ties_xy += txy;
  out = t;
}

void min_max_avx2(const double* v, std::size_t n, double& mn, double& mx) {
  double lo = v[0];
  double hi = v[0];
  std::size_t i = 1;
  if (n >= 5) {
    __m256d vlo = _mm256_loadu_pd(v + 1);
    __m256d vhi = vlo;
    for (i = 5; i + 4 <= n; i += 4) {
      const __m256d chunk = _mm256_loadu_pd(v + i);
      vlo = _mm256_min_pd(vlo, chunk);
      vhi = _mm256_max_pd(vhi, chunk);
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, vlo);
    for (double lane : lanes)
      if (lane < lo) lo = lane;
    _mm256_storeu_pd(lanes, vhi);
    for (double lane : lanes)
      if (lane > hi) hi = lane;
  }
  for (; i < n; ++i) {
    if (v[i] < lo) lo = v[i];
    if (v[i] > hi) hi = v[i];
  }
  mn = lo;
  mx = hi;
}

void affine_map_avx2(const double* in, std::size_t n, double sub, double scale,
                     double add, double* out) {
  const __m256d vsub = _mm256_set1_pd(sub);
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vadd = _mm256_set1_pd(add);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(in + i);
    const __m256d r = _mm256_add_pd(
        _mm256_mul_pd(_mm256_sub_pd(v, vsub), vscale), vadd);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) {
    out[i] = (in[i] - sub) * scale + add;
  }
}

void moving_average_avx2(const double* x, std::size_t n, std::size_t k,
                         double* out) {
  moving_average_head(x, n, k, out);
  std::size_t i = (k - 1 < n) ? k - 1 : n;
  // Four staggered windows at once; lane t accumulates x[i-k+1+t .. i+t]
  // left to right, matching the scalar summation order exactly.
  const __m256d vk = _mm256_set1_pd(static_cast<double>(k));
  for (; i + 4 <= n; i += 4) {
    const std::size_t lo = i + 1 - k;
    __m256d acc = _mm256_loadu_pd(x + lo);
    for (std::size_t t = 1; t < k; ++t) {
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + lo + t));
    }
    _mm256_storeu_pd(out + i, _mm256_div_pd(acc, vk));
  }
  for (; i < n; ++i) {
    out[i] = moving_average_at(x, i, k);
  }
}

}  // namespace

const Ops& avx2_ops() noexcept {
  static const Ops ops{
      Backend::avx2,
      &count_pair_classes_avx2,
      &min_max_avx2,
      &affine_map_avx2,
      &moving_average_avx2,
  };
  return ops;
}

}  // namespace swd::kernels

#endif  // SWD_HAVE_AVX2
