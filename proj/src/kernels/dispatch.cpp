// Runtime backend selection. The default is the widest instruction set the
// CPU supports; SWD_KERNELS=auto|scalar|avx2 overrides it at process start,
// and set_backend() overrides it programmatically (used by the equivalence
// tests to run both implementations on the same inputs).

#include "swd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "swd/error.hpp"

namespace swd::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(SWD_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Ops* ops_for(Backend b) {
#if defined(SWD_HAVE_AVX2)
  if (b == Backend::avx2) return &avx2_ops();
#endif
  (void)b;
  return &scalar_ops();
}

const Ops* probe() {
  Backend pick = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("SWD_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") {
      pick = Backend::scalar;
    } else if (want == "avx2") {
      if (!backend_available(Backend::avx2))
        raise(errc::invalid_param, "SWD_KERNELS=avx2: AVX2 not available");
      pick = Backend::avx2;
    } else if (want != "auto" && !want.empty()) {
      raise(errc::invalid_param, "SWD_KERNELS: unknown backend '" + want +
                                     "' (expected auto, scalar, or avx2)");
    }
  }
  return ops_for(pick);
}

std::atomic<const Ops*> g_ops{nullptr};

const Ops& current() {
  const Ops* ops = g_ops.load(std::memory_order_acquire);
  if (!ops) {
    ops = probe();
    g_ops.store(ops, std::memory_order_release);
  }
  return *ops;
}

}  // namespace

const char* backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(SWD_HAVE_AVX2)
      return cpu_has_avx2();
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return current().id; }

void set_backend(Backend b) {
  if (!backend_available(b))
    raise(errc::invalid_param,
          std::string("backend not available: ") + backend_name(b));
  g_ops.store(ops_for(b), std::memory_order_release);
}

void count_pair_classes(std::span<const double> x, std::span<const double> y,
                        PairTally& out) {
  if (x.size() != y.size())
    raise(errc::length_mismatch, "pair tally: sequences differ in length");
  out = PairTally{};
  if (x.size() < 2) return;
  current().count_pair_classes(x.data(), y.data(), x.size(), out);
}

void min_max(std::span<const double> v, double& mn, double& mx) {
  if (v.empty()) raise(errc::invalid_param, "min_max: empty input");
  current().min_max(v.data(), v.size(), mn, mx);
}

void affine_map(std::span<const double> in, double sub, double scale,
                double add, std::span<double> out) {
  if (in.size() != out.size())
    raise(errc::length_mismatch, "affine_map: output length mismatch");
  if (in.empty()) return;
  current().affine_map(in.data(), in.size(), sub, scale, add, out.data());
}

void moving_average(std::span<const double> x, std::size_t k,
                    std::span<double> out) {
  if (k == 0) raise(errc::invalid_param, "moving_average: k must be >= 1");
  if (x.size() != out.size())
    raise(errc::length_mismatch, "moving_average: output length mismatch");
  if (x.empty()) return;
  current().moving_average(x.data(), x.size(), k, out.data());
}

}  // namespace swd::kernels
