#include "perccode/rng.hpp"

namespace perccode {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

SampleStream::SampleStream(std::uint64_t master_seed, std::uint64_t index) noexcept {
  std::uint64_t state = mix(mix(master_seed + kGolden) ^ mix(index * kGolden + 0x632BE59BD9B4E019ULL));
  for (auto& word : s_) {
    state += kGolden;
    word = mix(state);
  }
}

std::uint64_t SampleStream::next_u64() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

}  // namespace perccode
