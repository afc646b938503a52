#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace tdlc {

// Deterministic random source. mt19937_64 output is fully specified by the
// standard, and the bounded draws below avoid std::uniform_int_distribution,
// whose mapping is implementation-defined. Streams are therefore identical
// across platforms for a fixed seed, which the reporting layer relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform draw from [0, n). Rejection sampling keeps the draw unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t umax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = umax - (umax % n) - 1;
    std::uint64_t v = next();
    while (v > limit) v = next();
    return v % n;
  }

  // Uniform draw from [lo, hi], inclusive.
  long long range(long long lo, long long hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<long long>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool coin() { return (next() & 1u) != 0; }

  // Child stream with a stream id; children of the same parent with distinct
  // ids are independent and reproducible.
  Rng fork(std::uint64_t stream) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace tdlc
