#pragma once

#include <cstdint>
#include <optional>

namespace riemopt {

/// SplitMix64 (Steele, Lea, Flood 2014). Bit-identical on every platform.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

private:
  std::uint64_t state_;
};

/// Standard normal draws by the Box-Muller transform over a SplitMix64 stream.
/// Each pair of uniforms yields two normals; the sine branch is cached.
class NormalStream {
public:
  explicit NormalStream(std::uint64_t seed) noexcept : rng_(seed) {}

  double next();

private:
  SplitMix64 rng_;
  std::optional<double> cached_;
};

}  // namespace riemopt
