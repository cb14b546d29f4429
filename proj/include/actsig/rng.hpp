#pragma once

#include <array>
#include <cstdint>

namespace actsig {

/// Philox4x32-10 counter-based generator: a keyed bijection on 128-bit
/// counters, so any sample can be produced independently of every other one.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Standard normal quantile (Wichura's AS241, relative error below 1e-15).
/// Requires 0 < p < 1.
double normal_quantile(double p);

/// A keyed stream of uniforms and normals addressed by index. The key is the
/// seed; the upper counter words hold the stream id, the lower the index.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  /// Two uniforms in the open interval (0, 1), 53 bits each.
  std::array<double, 2> uniforms(std::uint64_t index) const noexcept;

  /// Two independent standard normals by inverse CDF.
  std::array<double, 2> normals(std::uint64_t index) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
};

}  // namespace actsig
