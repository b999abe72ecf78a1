#include "kernels_internal.hpp"

namespace swd::kernels::scalar {

void count_pair_classes(const double* x, const double* y, std::size_t n,
                        PairTally& out) {
  PairTally t;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      classify_pair(xi, yi, x[j], y[j], t);
    }
  }
  out = t;
}

void min_max(const double* v, std::size_t n, double& mn, double& mx) {
  double lo = v[0];
  double hi = v[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] < lo) lo = v[i];
    if (v[i] > hi) hi = v[i];
  }
  mn = lo;
  mx = hi;
}

void affine_map(const double* in, std::size_t n, double sub, double scale,
                double add, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (in[i] - sub) * scale + add;
  }
}

void moving_average(const double* x, std::size_t n, std::size_t k,
                    double* out) {
  moving_average_head(x, n, k, out);
  for (std::size_t i = (k - 1 < n) ? k - 1 : n; i < n; ++i) {
    out[i] = moving_average_at(x, i, k);
  }
}

}  // namespace swd::kernels::scalar

namespace swd::kernels {

const Ops& scalar_ops() noexcept {
  static const Ops ops{
      Backend::scalar,
      &scalar::count_pair_classes,
      &scalar::min_max,
      &scalar::affine_map,
      &scalar::moving_average,
  };
  return ops;
}

}  // namespace swd::kernels
