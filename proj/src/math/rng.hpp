#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace gprc::math {

// Deterministic substream derivation: folds each path element into the key so
// that (seed, path) -> seed is stable across platforms and thread schedules.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

// Stream tags used when deriving per-purpose seeds.
inline constexpr std::uint64_t kStreamSimulation = 0x73696d;   // scenario draws
inline constexpr std::uint64_t kStreamBootstrap = 0x626f6f74;  // resampling
inline constexpr std::uint64_t kStreamPosterior = 0x706f7374;  // posterior MC draws

// xoshiro256++ with splitmix64 state initialization.  All variate
// transformations are implemented here (not via <random> distributions) so
// that streams are byte-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  // Uniform integer in {0, ..., n-1}; n must be positive.
  std::size_t uniform_index(std::size_t n);

  double normal();  // standard normal via inverse-CDF
  double normal(double mean, double sd) { return mean + sd * normal(); }
  double exponential();            // unit rate
  double gamma(double shape);      // unit rate, Marsaglia-Tsang
  double gamma(double shape, double rate) { return gamma(shape) / rate; }
  double inverse_gamma(double shape, double rate) { return rate / gamma(shape); }
  double laplace();                // location 0, scale 1
  double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace gprc::math
