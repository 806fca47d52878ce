#pragma once

#include <cmath>
#include <cstdint>
#include <cstddef>

namespace liss {

/// splitmix64 step; advances the state and returns the next word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic per-stream generator. A stream is addressed by
/// (root seed, stream id), so parallel workers draw independent,
/// schedule-independent sequences. No libstdc++ distributions are used;
/// the bit-to-double mapping is fixed here so results are reproducible
/// across standard libraries.
class Rng {
 public:
  Rng(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t s = root;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull);
    state_ = splitmix64(s);
    if (state_ == 0) state_ = 0x853C49E6748FEA9Bull;
  }

  std::uint64_t next() { return splitmix64(state_); }

  /// Uniform in [0, 1), 53 random bits.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = u01();
    } while (u1 <= 0.0);
    double u2 = u01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925287 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(u01() * static_cast<double>(n)) % n;
  }

 private:
  std::uint64_t state_ = 1;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace liss
