#include "beamforge/rng.hpp"

#include <cmath>
#include <numbers>

namespace beamforge {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  RngStream s;
  s.master_seed = master_seed;
  s.stream_index = index;
  s.state = mix64(mix64(master_seed) ^ mix64(index ^ 0x632be59bd9b4e019ULL));
  return s;
}

std::uint64_t RngStream::next_u64() {
  // splitmix64
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::uint64_t RngStream::bounded(std::uint64_t n) {
  __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (lo < threshold) {
      m = static_cast<__uint128_t>(next_u64()) * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

void RngStream::normal_pair(double& a, double& b) {
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  a = r * std::cos(phi);
  b = r * std::sin(phi);
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double a = 0.0;
  normal_pair(a, spare_);
  has_spare_ = true;
  return a;
}

std::complex<double> RngStream::complex_normal(double variance) {
  double g1 = 0.0;
  double g2 = 0.0;
  normal_pair(g1, g2);
  const double scale = std::sqrt(variance / 2.0);
  return {scale * g1, scale * g2};
}

}  // namespace beamforge
