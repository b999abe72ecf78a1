#pragma once

namespace swd {

/// Complementary error function evaluated by series / continued fraction,
/// not the libm builtin, so results are identical across platforms.
/// Relative accuracy ~1e-14 over the non-underflowing range.
double erfc_det(double x);

/// Standard normal upper-tail probability P(Z > z).
double normal_sf(double z);

/// Standard normal CDF P(Z <= z).
double normal_cdf(double z);

/// Two-sided tail 2*(1 - Phi(|z|)), clamped to [1e-300, 1].
double two_sided_p(double z);

/// One-sided upper tail 1 - Phi(z), clamped to [1e-300, 1].
double one_sided_p(double z);

/// Quantile function: x with Phi(x) = p, for p in (0, 1).
double inv_normal_cdf(double p);

inline constexpr double p_value_floor = 1e-300;

}  // namespace swd
