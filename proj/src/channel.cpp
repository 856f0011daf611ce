#include "beamforge/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beamforge {

ComplexVec steering_vector(int n, double theta) {
  if (n < 1) {
    throw std::invalid_argument("steering_vector: n must be >= 1");
  }
  ComplexVec v(static_cast<std::size_t>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    const double phase = std::numbers::pi * theta * k;
    v[k] = Complex{scale * std::cos(phase), scale * std::sin(phase)};
  }
  return v;
}

ChannelRealization channel_from_paths(
    const ScenarioConfig& cfg, std::vector<std::vector<PathParams>> paths) {
  const int n = cfg.n_antennas;
  const double scale =
      std::sqrt(static_cast<double>(n) / static_cast<double>(cfg.n_paths));
  ChannelRealization ch;
  ch.h.reserve(paths.size());
  for (const auto& user_paths : paths) {
    ComplexVec h(static_cast<std::size_t>(n), Complex{0.0, 0.0});
    for (const PathParams& p : user_paths) {
      const ComplexVec a = steering_vector(n, p.theta);
      for (int k = 0; k < n; ++k) h[k] += p.gain * a[k];
    }
    for (int k = 0; k < n; ++k) h[k] *= scale;
    ch.h.push_back(std::move(h));
  }
  ch.paths = std::move(paths);
  return ch;
}

ChannelRealization sample_channel(const ScenarioConfig& cfg, RngStream& rng) {
  std::vector<std::vector<PathParams>> paths(
      static_cast<std::size_t>(cfg.n_users));
  for (auto& user_paths : paths) {
    user_paths.reserve(static_cast<std::size_t>(cfg.n_paths));
    for (int i = 0; i < cfg.n_paths; ++i) {
      PathParams p;
      p.aoa = rng.uniform(-std::numbers::pi, std::numbers::pi);
      p.theta = std::sin(p.aoa);
      const double var = (i == 0) ? cfg.los_gain_var : cfg.nlos_gain_var;
      p.gain = rng.complex_normal(var);
      user_paths.push_back(p);
    }
  }
  return channel_from_paths(cfg, std::move(paths));
}

}  // namespace beamforge
