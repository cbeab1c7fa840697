#pragma once

// Splittable, platform-stable random streams.
//
// Every random quantity in the engine is drawn from a stream derived from a
// StreamKey by a fixed path of tags (chain index, pair index, scan, round...).
// Results are therefore a pure function of the seed, independent of the
// number of worker threads or the order in which they run.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace nrpt {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Maps 64 random bits to a double in [0, 1) with 53 bits of precision.
constexpr double bits_to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Stream tags. Distinct purposes never share draws.
enum class Purpose : std::uint64_t {
  kExplore = 1,
  kSwap = 2,
  kParity = 3,
  kInit = 4,
  kRound = 5,
  kCopy = 6,
  kSimulation = 7,
  kSampling = 8,
};

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// Uniform on [0, 1).
  double uniform() { return bits_to_unit((*this)()); }

  /// Uniform on the open interval (0, 1); safe to take logs of.
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    const auto wide = static_cast<unsigned __int128>((*this)()) * static_cast<unsigned __int128>(n);
    return static_cast<std::size_t>(wide >> 64);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Root of a tree of independent streams. Children are derived by hashing,
/// so a key can be split without consuming any randomness.
class StreamKey {
 public:
  constexpr explicit StreamKey(std::uint64_t seed) : value_(mix64(seed + kGoldenGamma)) {}

  constexpr StreamKey child(std::uint64_t tag) const {
    return StreamKey(Raw{}, mix64(value_ ^ mix64(tag + 0x632BE59BD9B4E019ULL)));
  }
  constexpr StreamKey child(Purpose purpose) const {
    return child(static_cast<std::uint64_t>(purpose));
  }
  constexpr StreamKey child(Purpose purpose, std::uint64_t index) const {
    return child(purpose).child(index);
  }

  /// Counter-based uniform on [0, 1) addressed by (a, b). Two calls with the
  /// same address return the same value.
  constexpr double uniform_at(std::uint64_t a, std::uint64_t b) const {
    return bits_to_unit(mix64(mix64(value_ + (a + 1) * kGoldenGamma) ^ (b * 0xD1B54A32D192ED03ULL)));
  }

  RandomStream stream() const { return RandomStream(value_); }

  constexpr std::uint64_t value() const { return value_; }

  friend constexpr bool operator==(const StreamKey&, const StreamKey&) = default;

 private:
  struct Raw {};
  constexpr StreamKey(Raw, std::uint64_t value) : value_(value) {}

  std::uint64_t value_;
};

}  // namespace nrpt
