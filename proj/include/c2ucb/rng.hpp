#pragma once

// Counter-based pseudo-random generator so streams are identical across
// platforms and implementations. Draw i of the stream keyed by K is
//
//   out_i = finalize(K + i * 0x9e3779b97f4a7c15)
//
// where finalize is the splitmix64 output function. Stream keys are derived
// as K = finalize(finalize(seed) ^ (sub + 1)); sub is the substream index
// (round number, trial number, ...).

#include <cmath>
#include <cstdint>
#include <vector>

#include "c2ucb/matrix.hpp"

namespace c2ucb {

inline constexpr std::uint64_t kRngGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t substream)
      : key_(splitmix64_finalize(splitmix64_finalize(seed + kRngGamma) ^
                                 (substream + 1))) {}

  std::uint64_t next_u64() { return splitmix64_finalize(key_ + (++ctr_) * kRngGamma); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log argument.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Box-Muller; the spare draw is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Gaussian direction scaled by U^(1/d): uniform in the unit ball.
  Vector unit_ball(std::size_t d) {
    Vector x(d);
    double n2 = 0.0;
    for (double& v : x) {
      v = next_gaussian();
      n2 += v * v;
    }
    const double n = std::sqrt(n2);
    const double radius =
        std::pow(next_unit_open(), 1.0 / static_cast<double>(d));
    if (n > 0.0)
      for (double& v : x) v *= radius / n;
    return x;
  }

  Vector unit_sphere(std::size_t d) {
    Vector x(d);
    double n2 = 0.0;
    for (double& v : x) {
      v = next_gaussian();
      n2 += v * v;
    }
    double n = std::sqrt(n2);
    if (n == 0.0) {
      x[0] = 1.0;
      n = 1.0;
    }
    for (double& v : x) v /= n;
    return x;
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace c2ucb
