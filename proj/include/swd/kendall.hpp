#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace swd::kendall {

/// Exhaustive classification of the n(n-1)/2 observation pairs.
struct PairCounts {
  std::uint64_t n_c = 0;       // concordant
  std::uint64_t n_d = 0;       // discordant
  std::uint64_t ties_x = 0;    // tied in x only
  std::uint64_t ties_y = 0;    // tied in y only
  std::uint64_t ties_xy = 0;   // tied in both
  std::size_t n = 0;

  std::uint64_t total_pairs() const noexcept {
    const std::uint64_t un = n;
    return un * (un - 1) / 2;
  }
};

enum class TauVariant { tau_a, tau_b };
enum class Tail { two_sided, one_sided };

struct TauResult {
  double tau = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  PairCounts counts;
  TauVariant variant = TauVariant::tau_b;
};

/// O(n^2) pair classification (SIMD-accelerated; the correctness oracle for
/// the fast path). Throws too_short (n < 2) or length_mismatch.
PairCounts count_pairs_bruteforce(std::span<const double> x,
                                  std::span<const double> y);

/// O(n log n) equivalent: sort by (x, y), tie runs by scan, discordant pairs
/// by merge-sort inversion counting. Same errors as the brute force.
PairCounts count_pairs_fast(std::span<const double> x,
                            std::span<const double> y);

/// 2(n_c - n_d) / (n(n-1)); no tie correction.
double tau_a(const PairCounts& counts);

/// (n_c - n_d) / sqrt((n0 - t_x)(n0 - t_y)) with n0 = n(n-1)/2,
/// t_x = ties_x + ties_xy, t_y = ties_y + ties_xy. Collapses to tau_a
/// exactly on tie-free input. Throws all_tied when a factor is zero.
double tau_b(const PairCounts& counts);

double tau_from_counts(const PairCounts& counts, TauVariant variant);

/// z = 3*tau*sqrt(n(n-1)) / sqrt(2(2n+5)) and its normal-tail p-value
/// (two-sided by default), p clamped to [1e-300, 1].
/// Throws too_short when n < 3.
std::pair<double, double> significance(double tau, std::size_t n,
                                       Tail tail = Tail::two_sided);

/// Full result via the brute-force counter.
TauResult tau_bruteforce(std::span<const double> x, std::span<const double> y,
                         TauVariant variant = TauVariant::tau_b,
                         Tail tail = Tail::two_sided);

/// Full result via the O(n log n) counter; agrees with tau_bruteforce
/// to 1e-12 (the counts are identical integers, so exactly in practice).
TauResult tau_fast(std::span<const double> x, std::span<const double> y,
                   TauVariant variant = TauVariant::tau_b,
                   Tail tail = Tail::two_sided);

}  // namespace swd::kendall
