#include "riemopt/random.hpp"

#include <cmath>
#include <numbers>

namespace riemopt {

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double NormalStream::next() {
  if (cached_) {
    const double v = *cached_;
    cached_.reset();
    return v;
  }
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = 1.0 - rng_.uniform();
  const double u2 = rng_.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  return r * std::cos(theta);
}

}  // namespace riemopt
