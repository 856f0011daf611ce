#ifndef BEAMFORGE_CHANNEL_HPP
#define BEAMFORGE_CHANNEL_HPP

#include <vector>

#include "beamforge/core_math.hpp"
#include "beamforge/rng.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

// One propagation path: complex gain, angle of arrival, and its direction
// parameter theta = sin(aoa) for a half-wavelength ULA.
struct PathParams {
  Complex gain;
  double aoa = 0.0;    // radians in [-pi, pi)
  double theta = 0.0;  // sin(aoa) in [-1, 1]
};

// Per-user path sets (index 0 = LOS) and the resulting channel vectors.
struct ChannelRealization {
  std::vector<std::vector<PathParams>> paths;  // [user][path]
  std::vector<ComplexVec> h;                   // [user], each length N_A
};

// alpha(N, theta): entry k = exp(j*pi*theta*k) / sqrt(N). Unit l2 norm.
ComplexVec steering_vector(int n, double theta);

// Deterministic channel assembly from explicit paths; doubles as the test
// hook for forced gains/angles. h_u = sqrt(N_A/L) * sum_i g_i * alpha(N_A, theta_i).
ChannelRealization channel_from_paths(
    const ScenarioConfig& cfg, std::vector<std::vector<PathParams>> paths);

// Draws aoa ~ U[-pi, pi) and gain ~ CN(0, var) per path (LOS variance for the
// first path, NLOS variance for the rest), in (user, path) order.
ChannelRealization sample_channel(const ScenarioConfig& cfg, RngStream& rng);

}  // namespace beamforge

#endif
