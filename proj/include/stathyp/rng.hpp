#pragma once

#include <cstdint>
#include <limits>

namespace stathyp {

/// Counter-based generator: every (seed, stream) pair owns an independent
/// SplitMix64 sequence, so sample i never depends on how many samples were
/// drawn before it or on which worker drew them.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  // Each stream starts at a hashed offset; consecutive streams must not be
  // shifted copies of one another along the Weyl sequence.
  StreamRng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(mix(seed ^ 0x6a09e667f3bcc909ULL) ^ mix((stream + 1) * 0xd1342543de82ef95ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log argument.
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace stathyp
