#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace staleperc {

// Stream purposes. Every random draw in a run is keyed by (seed, purpose,
// indices) so that enabling one source never shifts another.
enum class Purpose : std::uint64_t {
  kWitness = 1,
  kExamples = 2,
  kPartition = 3,
  kOrder = 4,
  kParticipation = 5,
  kDelay = 6,
  kDownlink = 7,
  kUplink = 8,
  kReplica = 9,
  kScript = 10,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: hashes the base seed with a purpose tag and
/// an arbitrary list of indices.
inline std::uint64_t derive_seed(std::uint64_t base, Purpose purpose,
                                 std::initializer_list<std::int64_t> indices = {}) {
  std::uint64_t h = splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(purpose)));
  for (std::int64_t idx : indices) {
    h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(idx) + 0x632BE59BD9B4E019ULL));
  }
  return h;
}

/// SplitMix64 as a UniformRandomBitGenerator. Cheap to construct, so a fresh
/// engine per (purpose, client, round) key costs nothing.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline SplitMix64 make_stream(std::uint64_t base, Purpose purpose,
                              std::initializer_list<std::int64_t> indices = {}) {
  return SplitMix64(derive_seed(base, purpose, indices));
}

}  // namespace staleperc
