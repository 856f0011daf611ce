#ifndef BEAMFORGE_MEASUREMENT_HPP
#define BEAMFORGE_MEASUREMENT_HPP

#include <cstdint>
#include <vector>

#include "beamforge/channel.hpp"
#include "beamforge/core_math.hpp"
#include "beamforge/rng.hpp"

namespace beamforge {

// Stacked received vector over all training slots:
//   r = W^H (sum_u h_u) + W^H n,  n ~ CN(0, noise_var * I_{N_A}).
// Noise is drawn per antenna and projected through W^H.
ComplexVec synthesize_measurement(const ChannelRealization& ch,
                                  const ComplexMat& w, double noise_var,
                                  RngStream& rng);

// Beam distribution vector: ones at the LOS beam indices of all users.
std::vector<std::uint8_t> label_vector(const ChannelRealization& ch,
                                       int n_antennas);

}  // namespace beamforge

#endif
