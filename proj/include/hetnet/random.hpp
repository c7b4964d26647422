#pragma once

#include <cstdint>
#include <random>

namespace hetnet {

// Stream identifiers within one trial. Streams of different kinds never share
// draws, so e.g. fading does not perturb geometry.
enum class StreamKind : std::uint64_t {
  kDeployment = 1,
  kFading = 2,
  kPairwise = 3,
  kImportance = 4,
};

/// A reproducible random stream. Construct through derive_stream so that
/// every (seed, trial, stream) triple maps to an independent generator.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RandomStream(std::uint64_t key) : engine_(key) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double unit_exponential() { return std::exponential_distribution<double>(1.0)(engine_); }
  double standard_normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::uint64_t poisson(double mean) {
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
  }

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Key for trial `trial` of stream `stream` under master seed `seed`.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  return RandomStream(stream_key(seed, trial, stream));
}

inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t trial, StreamKind kind,
                                  std::uint64_t offset = 0) {
  return derive_stream(seed, trial, static_cast<std::uint64_t>(kind) + offset);
}

}  // namespace hetnet
