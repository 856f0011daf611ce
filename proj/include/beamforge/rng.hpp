#ifndef BEAMFORGE_RNG_HPP
#define BEAMFORGE_RNG_HPP

#include <complex>
#include <cstdint>

namespace beamforge {

// Counter-based deterministic random stream. Streams derived from the same
// (master_seed, stream_index) pair produce identical draw sequences on every
// platform; distinct indices give statistically independent sequences.
// Single-consumer: parallel users derive their own stream.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  std::uint64_t state = 0;

  std::uint64_t next_u64();

  // Uniform on [0,1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);

  // Uniform integer on [0, n), n >= 1. Lemire multiply-shift with rejection.
  std::uint64_t bounded(std::uint64_t n);

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();
  void normal_pair(double& a, double& b);

  // CN(0, variance): (sigma/sqrt(2)) * (g1 + j*g2) with independent normals.
  std::complex<double> complex_normal(double variance);

 private:
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// 64-bit finalizer used for counter-based stream derivation.
std::uint64_t mix64(std::uint64_t z);

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t index);

// Stream-index namespaces. Dataset records occupy [0, 2^32); everything else
// lives above so one master seed can drive a whole pipeline without overlap.
inline constexpr std::uint64_t kStreamSplit = (1ULL << 32) + 0;
inline constexpr std::uint64_t kStreamInit = (1ULL << 32) + 1;
inline constexpr std::uint64_t kStreamBatch = (1ULL << 32) + 2;
inline constexpr std::uint64_t kStreamSweepBase = (1ULL << 33);

}  // namespace beamforge

#endif
