#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace nashflow {

// Counter-derived random stream. Every draw the library makes comes from a
// stream keyed by (master seed, purpose, player, round), so results do not
// depend on the order in which players or runs execute.
//
// Satisfies UniformRandomBitGenerator and can be handed to <random>
// distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  // Stream for a tuple of keys below a master seed.
  static Rng Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();

  // Index drawn from a discrete distribution given by nonnegative weights.
  int Categorical(const std::vector<double>& probs);

 private:
  std::uint64_t state_;
};

// Purposes used to separate streams that share (seed, player, round).
enum class StreamPurpose : std::uint64_t {
  kActionSample = 1,
  kPayoffNoise = 2,
  kTieBreak = 3,
  kRandomUpdate = 4,
  kSampling = 5,
  kInstance = 6,
};

inline Rng PlayerStream(std::uint64_t seed, StreamPurpose purpose, int player,
                        std::int64_t round) {
  return Rng::Stream(seed, {static_cast<std::uint64_t>(purpose),
                            static_cast<std::uint64_t>(player),
                            static_cast<std::uint64_t>(round)});
}

}  // namespace nashflow
