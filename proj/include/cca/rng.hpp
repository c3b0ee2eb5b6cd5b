#pragma once

#include <cstdint>

namespace cca {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer: bijective 64-bit mixer with full avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Names a deterministic random stream.  Derived substreams depend only on the
// spec and the salt, never on how many draws were consumed elsewhere, so any
// decomposition of work across threads or processes sees identical randomness.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  constexpr SeedSpec substream(std::uint64_t salt) const noexcept {
    return SeedSpec{master_seed, mix64(stream_index + kGolden * (salt + 1))};
  }
  constexpr bool operator==(const SeedSpec&) const noexcept = default;
};

// Collapses a SeedSpec into the key of its counter-based generator.
inline constexpr std::uint64_t stream_key(const SeedSpec& s) noexcept {
  return mix64(mix64(s.master_seed + kGolden) ^ mix64(s.stream_index + 2 * kGolden));
}

// Pure function of (key, counter): the counter-th draw of the stream.  Lets a
// kernel consume draws indexed by cell/step/sample without shared state.
inline constexpr std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + kGolden * (counter + 1));
}

// Uniform double in [0,1) from 53 high bits.
inline constexpr double unit_from_bits(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline constexpr double counter_unit(std::uint64_t key, std::uint64_t counter) noexcept {
  return unit_from_bits(counter_bits(key, counter));
}

// Sequential convenience wrapper over the same counter scheme.
class StreamRng {
 public:
  explicit constexpr StreamRng(const SeedSpec& s) noexcept : key_(stream_key(s)) {}
  constexpr std::uint64_t next_u64() noexcept { return counter_bits(key_, counter_++); }
  constexpr double next_unit() noexcept { return unit_from_bits(next_u64()); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cca
