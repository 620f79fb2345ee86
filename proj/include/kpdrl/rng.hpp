#pragma once

#include <cstdint>
#include <random>

namespace kpdrl {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream `stream` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seedable generator with portable draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not (their algorithms differ
/// between library vendors), so the bounded draws are implemented here.
/// Dataset files depend on this exact sequence.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream)
      : engine_(stream_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi] by rejection sampling. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform index in [0, n). Requires n >= 1.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

} // namespace kpdrl
