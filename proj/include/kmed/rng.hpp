#pragma once

#include <cstdint>
#include <random>

namespace kmed {

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is pinned bit-for-bit by the standard, and all derived draws
// (indices, doubles, normals) are computed here rather than with the
// implementation-defined std::*_distribution adaptors, so a seed reproduces
// the same sequence on every platform. Run r of a replication uses the
// derived seed root + r.
class RngStream {
 public:
  RngStream() : RngStream(0) {}

  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, bound); unbiased via rejection. bound must be >= 1.
  int next_index(int bound) {
    const auto b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return static_cast<int>(x % b);
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double next_normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace kmed
