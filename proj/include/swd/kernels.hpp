#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace swd::kernels {

/// Raw tallies produced by the pair-classification kernels. ties_x / ties_y
/// count pairs tied only in that coordinate; ties_xy pairs tied in both.
struct PairTally {
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t ties_x = 0;
  std::uint64_t ties_y = 0;
  std::uint64_t ties_xy = 0;

  std::uint64_t total() const noexcept {
    return concordant + discordant + ties_x + ties_y + ties_xy;
  }
};

enum class Backend { scalar, avx2 };

const char* backend_name(Backend) noexcept;
bool backend_available(Backend) noexcept;

/// Backend used by the dispatched entry points below. Selected once on first
/// use: AVX2 when the CPU supports it, scalar otherwise. The SWD_KERNELS
/// environment variable (auto | scalar | avx2) overrides the probe.
Backend active_backend();

/// Force a backend. Throws invalid_param if it is not available on this CPU.
void set_backend(Backend);

/// Classify all n(n-1)/2 index pairs of (x, y) into the five tally classes.
/// Both spans must have the same length. Values must be finite (no NaN).
void count_pair_classes(std::span<const double> x, std::span<const double> y,
                        PairTally& out);

/// Minimum and maximum of a non-empty range.
void min_max(std::span<const double> v, double& mn, double& mx);

/// out[i] = (in[i] - sub) * scale + add. in and out may not alias.
void affine_map(std::span<const double> in, double sub, double scale,
                double add, std::span<double> out);

/// Causal k-point moving average with an expanding window at the start:
/// out[n] = mean(x[max(0, n-k+1) .. n]). Requires k >= 1; no aliasing.
/// Window sums run left to right in every backend, so results are
/// bit-identical between scalar and SIMD paths.
void moving_average(std::span<const double> x, std::size_t k,
                    std::span<double> out);

/// The scalar reference kernels, callable directly. These are the oracles
/// the SIMD variants are equivalence-tested against.
namespace scalar {
void count_pair_classes(const double* x, const double* y, std::size_t n,
                        PairTally& out);
void min_max(const double* v, std::size_t n, double& mn, double& mx);
void affine_map(const double* in, std::size_t n, double sub, double scale,
                double add, double* out);
void moving_average(const double* x, std::size_t n, std::size_t k,
                    double* out);
}  // namespace scalar

}  // namespace swd::kernels
