#ifndef BEAMFORGE_ADAM_HPP
#define BEAMFORGE_ADAM_HPP

#include <cstdint>

#include "beamforge/conv_net.hpp"

namespace beamforge {

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

// First/second moment accumulators, same shapes as the parameters.
struct AdamState {
  NetworkParameters m;
  NetworkParameters v;
  std::int64_t step = 0;

  static AdamState zeros_like(const ArchitectureSpec& arch);
};

// One bias-corrected Adam update; increments the step counter once per call.
void adam_step(NetworkParameters& params, const NetworkParameters& grads,
               AdamState& state, double lr);

}  // namespace beamforge

#endif
