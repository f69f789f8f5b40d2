#pragma once

// Counter-based random number generation (Philox 4x32-10). Draws are a pure
// function of (seed, replica, substream, step, index), so replicas and coupled
// trajectory legs are reproducible regardless of evaluation order, and the two
// legs of a synchronous coupling can share the exact same stream.

#include <array>
#include <cstdint>

#include "ctkit/matrixkit.hpp"

namespace ctkit {

namespace detail {

struct Philox4x32 {
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t pa = std::uint64_t(kMulA) * ctr[0];
      const std::uint64_t pb = std::uint64_t(kMulB) * ctr[2];
      ctr = {std::uint32_t(pb >> 32) ^ ctr[1] ^ key[0], std::uint32_t(pb),
             std::uint32_t(pa >> 32) ^ ctr[3] ^ key[1], std::uint32_t(pa)};
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    return ctr;
  }
};

}  // namespace detail

/// One logical stream of iid draws, addressed by (step, index).
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t replica, std::uint32_t substream)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        replica_(replica),
        substream_(substream) {}

  /// Uniform in (0, 1], indexed draw.
  double uniform(std::uint64_t step, std::uint32_t index) const {
    auto words = detail::Philox4x32::block(
        {std::uint32_t(step), std::uint32_t(step >> 32),
         std::uint32_t(replica_) ^ (substream_ << 16) ^ std::uint32_t(index >> 1),
         std::uint32_t(replica_ >> 32) + index},
        key_);
    const std::uint64_t bits = (std::uint64_t(words[0]) << 32) | words[1];
    return (double(bits >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  }

  /// Standard normal, indexed draw (Box-Muller).
  double normal(std::uint64_t step, std::uint32_t index) const {
    const double u1 = uniform(step, 2 * index);
    const double u2 = uniform(step, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Exponential with rate lambda.
  double exponential(std::uint64_t step, std::uint32_t index, double lambda) const {
    return -std::log(uniform(step, 2 * index)) / lambda;
  }

  Vector gaussians(std::uint64_t step, Eigen::Index count, std::uint32_t offset = 0) const {
    Vector out(count);
    for (Eigen::Index i = 0; i < count; ++i)
      out[i] = normal(step, offset + std::uint32_t(i));
    return out;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t replica_;
  std::uint32_t substream_;
};

}  // namespace ctkit
