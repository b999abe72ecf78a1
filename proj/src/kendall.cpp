#include "swd/kendall.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "swd/error.hpp"
#include "swd/kernels.hpp"
#include "swd/normal.hpp"

namespace swd::kendall {
namespace {

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    raise(errc::length_mismatch,
          "x has " + std::to_string(x.size()) + " values, y has " +
              std::to_string(y.size()));
  if (x.size() < 2)
    raise(errc::too_short,
          "need at least 2 observations, got " + std::to_string(x.size()));
}

std::uint64_t choose2(std::uint64_t run) { return run * (run - 1) / 2; }

/// Maps a finite double to a 64-bit key whose unsigned order and equality
/// match the double's. Both zeroes collapse to the same key.
std::uint64_t order_key(double d) {
  const std::uint64_t u = std::bit_cast<std::uint64_t>(d == 0.0 ? 0.0 : d);
  return (u >> 63) ? ~u : (u | (std::uint64_t{1} << 63));
}

struct KeyPair {
  std::uint64_t x, y;
};

/// One stable LSD radix sort of pts on a single 64-bit field, 8 bits per
/// pass. A pass whose digit is constant across all elements is skipped.
template <std::uint64_t KeyPair::*Field>
void radix_sort_by(std::vector<KeyPair>& pts, std::vector<KeyPair>& buf) {
  const std::size_t n = pts.size();
  for (unsigned shift = 0; shift < 64; shift += 8) {
    std::array<std::size_t, 256> starts{};
    for (const KeyPair& p : pts) ++starts[(p.*Field >> shift) & 0xff];
    if (starts[(pts[0].*Field >> shift) & 0xff] == n) continue;
    std::size_t pos = 0;
    for (std::size_t& s : starts) {
      const std::size_t count = s;
      s = pos;
      pos += count;
    }
    for (const KeyPair& p : pts) buf[starts[(p.*Field >> shift) & 0xff]++] = p;
    pts.swap(buf);
  }
}

/// Strict inversions (left > right) counted during a bottom-up merge sort;
/// leaves v sorted. Equal elements take the left side first, so ties
/// contribute nothing.
std::uint64_t count_inversions(std::vector<std::uint64_t>& v) {
  const std::size_t n = v.size();
  std::vector<std::uint64_t> buf(n);
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          inversions += mid - i;
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                v.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

/// Eq. 6 statistic without the n >= 3 guard (the guard belongs to the
/// public significance() contract; full-result paths accept n = 2).
double z_statistic(double tau, std::size_t n) {
  const double dn = static_cast<double>(n);
  return 3.0 * tau * std::sqrt(dn * (dn - 1.0)) /
         std::sqrt(2.0 * (2.0 * dn + 5.0));
}

double tail_p(double z, Tail tail) {
  return tail == Tail::two_sided ? two_sided_p(z) : one_sided_p(z);
}

TauResult assemble(const PairCounts& counts, TauVariant variant, Tail tail) {
  TauResult r;
  r.counts = counts;
  r.variant = variant;
  r.tau = tau_from_counts(counts, variant);
  r.z = z_statistic(r.tau, counts.n);
  r.p_value = tail_p(r.z, tail);
  return r;
}

}  // namespace

PairCounts count_pairs_bruteforce(std::span<const double> x,
                                  std::span<const double> y) {
  check_lengths(x, y);
  kernels::PairTally t;
  kernels::count_pair_classes(x, y, t);
  PairCounts c;
  c.n_c = t.concordant;
  c.n_d = t.discordant;
  c.ties_x = t.ties_x;
  c.ties_y = t.ties_y;
  c.ties_xy = t.ties_xy;
  c.n = x.size();
  return c;
}

PairCounts count_pairs_fast(std::span<const double> x,
                            std::span<const double> y) {
  check_lengths(x, y);
  const std::size_t n = x.size();

  // Work on order-preserving integer keys: they compare cheaply and admit a
  // radix sort, and sorting is where nearly all the time goes.
  std::vector<KeyPair> pts(n);
  for (std::size_t i = 0; i < n; ++i)
    pts[i] = {order_key(x[i]), order_key(y[i])};

  if (n < 128) {
    std::sort(pts.begin(), pts.end(), [](const KeyPair& a, const KeyPair& b) {
      return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
  } else {
    // Stable passes compose: by y first, then by x, is (x, y) lexicographic.
    std::vector<KeyPair> buf(n);
    radix_sort_by<&KeyPair::y>(pts, buf);
    radix_sort_by<&KeyPair::x>(pts, buf);
  }

  // Tie mass in x (and jointly in x,y) from run lengths in the sorted order.
  std::uint64_t pairs_tied_x = 0, pairs_tied_xy = 0;
  {
    std::size_t run_x = 1, run_xy = 1;
    for (std::size_t i = 1; i < n; ++i) {
      const bool same_x = pts[i].x == pts[i - 1].x;
      const bool same_xy = same_x && pts[i].y == pts[i - 1].y;
      if (same_x) {
        ++run_x;
      } else {
        pairs_tied_x += choose2(run_x);
        run_x = 1;
      }
      if (same_xy) {
        ++run_xy;
      } else {
        pairs_tied_xy += choose2(run_xy);
        run_xy = 1;
      }
    }
    pairs_tied_x += choose2(run_x);
    pairs_tied_xy += choose2(run_xy);
  }

  // Discordant pairs = strict y-inversions in x-sorted order. Equal-x runs
  // are y-ascending by the sort key, so x-ties never register.
  std::vector<std::uint64_t> y_in_x_order(n);
  for (std::size_t i = 0; i < n; ++i) y_in_x_order[i] = pts[i].y;
  const std::uint64_t n_d = count_inversions(y_in_x_order);

  // The inversion count leaves the array sorted, so y tie runs fall out of
  // it with no extra sort.
  std::uint64_t pairs_tied_y = 0;
  {
    std::size_t run = 1;
    for (std::size_t i = 1; i < n; ++i) {
      if (y_in_x_order[i] == y_in_x_order[i - 1]) {
        ++run;
      } else {
        pairs_tied_y += choose2(run);
        run = 1;
      }
    }
    pairs_tied_y += choose2(run);
  }

  PairCounts c;
  c.n = n;
  const std::uint64_t n0 = c.total_pairs();
  c.n_d = n_d;
  c.ties_xy = pairs_tied_xy;
  c.ties_x = pairs_tied_x - pairs_tied_xy;
  c.ties_y = pairs_tied_y - pairs_tied_xy;
  c.n_c = n0 - pairs_tied_x - pairs_tied_y + pairs_tied_xy - n_d;
  return c;
}

double tau_a(const PairCounts& counts) {
  if (counts.n < 2) raise(errc::too_short, "tau_a: need n >= 2");
  const double diff = static_cast<double>(static_cast<std::int64_t>(counts.n_c) -
                                          static_cast<std::int64_t>(counts.n_d));
  return diff / static_cast<double>(counts.total_pairs());
}

double tau_b(const PairCounts& counts) {
  if (counts.n < 2) raise(errc::too_short, "tau_b: need n >= 2");
  const std::uint64_t n0 = counts.total_pairs();
  const std::uint64_t t_x = counts.ties_x + counts.ties_xy;
  const std::uint64_t t_y = counts.ties_y + counts.ties_xy;
  if (t_x == 0 && t_y == 0) return tau_a(counts);  // exact collapse, no sqrt
  if (t_x >= n0 || t_y >= n0)
    raise(errc::all_tied, "tau_b: all pairs tied in one variable");
  const double denom = std::sqrt(static_cast<double>(n0 - t_x) *
                                 static_cast<double>(n0 - t_y));
  const double diff = static_cast<double>(static_cast<std::int64_t>(counts.n_c) -
                                          static_cast<std::int64_t>(counts.n_d));
  return diff / denom;
}

double tau_from_counts(const PairCounts& counts, TauVariant variant) {
  return variant == TauVariant::tau_a ? tau_a(counts) : tau_b(counts);
}

std::pair<double, double> significance(double tau, std::size_t n, Tail tail) {
  if (n < 3)
    raise(errc::too_short,
          "significance: need n >= 3, got " + std::to_string(n));
  const double z = z_statistic(tau, n);
  return {z, tail_p(z, tail)};
}

TauResult tau_bruteforce(std::span<const double> x, std::span<const double> y,
                         TauVariant variant, Tail tail) {
  return assemble(count_pairs_bruteforce(x, y), variant, tail);
}

TauResult tau_fast(std::span<const double> x, std::span<const double> y,
                   TauVariant variant, Tail tail) {
  return assemble(count_pairs_fast(x, y), variant, tail);
}

}  // namespace swd::kendall
