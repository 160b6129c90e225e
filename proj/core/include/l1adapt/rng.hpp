#pragma once

#include <cstdint>

namespace l1adapt {

/// SplitMix64 stream. Chosen over std::mt19937 because the algorithm is
/// fully specified by its seed and produces identical sequences on every
/// platform, which the golden-trace tests rely on.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) using the top 53 bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  /// Derive an independent child stream from this one.
  SplitMix64 split() { return SplitMix64(next_u64()); }

private:
  std::uint64_t state_;
};

}  // namespace l1adapt
