#pragma once

namespace first {

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// Standard normal quantile (Wichura's AS 241, PPND16), accurate to about
/// 1e-16 relative. Returns -inf / +inf at 0 / 1 and NaN outside [0, 1].
double normal_quantile(double p) noexcept;

}  // namespace first
