#pragma once

#include <concepts>
#include <cstdint>
#include <string_view>

namespace perccode {

/// Tag written into every output that depends on sampled data. Bump it when
/// the generator, the stream derivation or the uniform mapping changes.
inline constexpr std::string_view kRngVersion = "xoshiro256ss+splitmix64-stream/v1";

inline constexpr std::uint64_t kDefaultSeed = 20211104;

/// Anything that yields uniform doubles in [0, 1).
template <class S>
concept UniformSource = requires(S& s) {
  { s() } -> std::convertible_to<double>;
};

/// Independent per-sample stream keyed by (master seed, sample index).
///
/// The state is derived by splitmix64 from both keys, so stream i depends on
/// nothing but (seed, i) and samples can be drawn in any order or thread.
class SampleStream {
 public:
  SampleStream(std::uint64_t master_seed, std::uint64_t index) noexcept;

  std::uint64_t next_u64() noexcept;

  /// 53-bit uniform in [0, 1).
  double operator()() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t s_[4];
};

}  // namespace perccode
