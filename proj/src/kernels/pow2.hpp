#pragma once

// Exact power-of-two renormalisation helpers shared by the scalar kernels.
// The AVX2 kernels replicate the same bit manipulation with intrinsics.

#include <bit>
#include <cstdint>

namespace natmodes::kernels::detail {

inline constexpr std::uint64_t kExpMask = 0x7FF0000000000000ULL;
inline constexpr std::uint64_t kTwoPow1023Bits = 0x7FE0000000000000ULL;

/// For a finite positive x, returns 2^-floor(log2 x) and adds floor(log2 x)
/// to exponent. Zero and subnormal inputs leave everything unchanged.
inline double pow2_inverse(double x, double& exponent) {
  const std::uint64_t e = std::bit_cast<std::uint64_t>(x) & kExpMask;
  if (e == 0) return 1.0;
  exponent += static_cast<double>(static_cast<std::int64_t>(e >> 52) - 1023);
  return std::bit_cast<double>(kTwoPow1023Bits - e);
}

inline double abs_max(double a, double b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  return a > b ? a : b;
}

}  // namespace natmodes::kernels::detail
