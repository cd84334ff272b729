#pragma once

#include <cmath>
#include <cstdint>

namespace rkm {

// splitmix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Deterministic splittable generator (splitmix64). Stream s of seed q is
// initialized as mix64(mix64(q + G) + G * (s + 1)) with G the golden-ratio
// increment, so stream k can be opened in any order and in parallel while
// producing the same values as a serial pass. Used for per-row sample
// streams, per-run experiment seeds, and noise draws.
class Rng {
 public:
  static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : state_(mix64(mix64(seed + golden) + golden * (stream + 1))) {}

  std::uint64_t next_u64() noexcept {
    state_ += golden;
    return mix64(state_);
  }

  // uniform in [0, 1)
  double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1); never returns an endpoint, safe under log()
  double next_open() noexcept {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  double next_uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_unit(); }

  // standard normal via Box-Muller; second value of the pair is cached
  double next_normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(next_open()));
    const double t = 2.0 * kPi * next_unit();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Laplace(0, scale) via inverse CDF
  double next_laplace(double scale) noexcept {
    const double u = next_open() - 0.5;
    return u < 0.0 ? scale * std::log1p(2.0 * u) : -scale * std::log1p(-2.0 * u);
  }

  bool next_bool() noexcept { return (next_u64() >> 63) != 0; }

  // +1 or -1 with equal probability
  double next_sign() noexcept { return next_bool() ? 1.0 : -1.0; }

 private:
  static constexpr double kPi = 3.14159265358979323846264338327950288;

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rkm
