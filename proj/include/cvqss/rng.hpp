#pragma once

#include <cmath>
#include <cstdint>

namespace cvqss {

// Counter-based substream generator. Each (seed, shot) pair yields an
// independent stream, so a run partitioned across threads draws exactly the
// same numbers as a serial run.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Per-shot stream of standard normals and fair coins.
class ShotRng {
 public:
  ShotRng(std::uint64_t seed, std::uint64_t shot)
      : gen_(mix(seed, shot)) {}

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // Box-Muller; 1-u keeps the log argument in (0, 1].
    double u1 = 1.0 - gen_.uniform01();
    double u2 = gen_.uniform01();
    double mag = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925286766559 * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
  }

  bool coin() { return (gen_.next() & 1ull) != 0; }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t shot) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (shot + 1)));
    g.next();
    return g.next();
  }

  SplitMix64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cvqss
