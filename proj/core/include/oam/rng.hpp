#pragma once

#include <cstdint>

namespace oam {

// SplitMix64 (Steele, Lea & Vigna): a fixed 64-bit generator with a closed
// form, identical on every platform. Protocol code derives one independent
// stream per trial so transcripts do not depend on scheduling or thread
// count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection-free modulo is fine here; n is tiny compared to 2^64.
    return next() % n;
  }

 private:
  std::uint64_t state_;
};

// Stream derivation: seed, stream index and salt are mixed through one
// SplitMix64 step each, so streams are statistically independent and the
// derivation is documented and portable.
inline SplitMix64 stream_for(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t salt = 0) {
  SplitMix64 a(seed);
  const std::uint64_t s0 = a.next();
  SplitMix64 b(s0 ^ (0xA0761D6478BD642Full * (stream + 1)));
  const std::uint64_t s1 = b.next();
  return SplitMix64(s1 ^ (0xE7037ED1A0B428DBull * (salt + 1)));
}

}  // namespace oam
