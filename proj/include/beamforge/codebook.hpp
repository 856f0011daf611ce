#ifndef BEAMFORGE_CODEBOOK_HPP
#define BEAMFORGE_CODEBOOK_HPP

#include <cstdint>

#include "beamforge/core_math.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

// Beam index (1-based) whose grid cell contains theta:
// floor(N_A * (theta + 1) / 2) + 1, clamped to N_A at theta = 1.
// Throws for theta outside [-1, 1].
int los_beam_index(double theta, int n_antennas);

// Codebook entry n (1-based): steering_vector(N_A, -1 + (2n-1)/N_A).
ComplexVec codeword(int beam, int n_antennas);

// Full codebook C, N_A x N_A; column n is codeword(n). Columns orthonormal.
ComplexMat build_codebook(int n_antennas);

// Measurement matrix W (N_A x M): column t is codeword(1 + (t-1)*floor(N_A/M)).
ComplexMat measurement_matrix(const ScenarioConfig& cfg);

// beta(theta) = C^H alpha(N_A, theta), length N_A, unit l2 norm.
ComplexVec beam_gain_profile(double theta, int n_antennas);
// Same using a prebuilt codebook (hot path for repeated evaluation).
ComplexVec beam_gain_profile(double theta, const ComplexMat& codebook);

struct BeamOracleResult {
  std::uint64_t samples = 0;
  std::uint64_t skipped_ties = 0;  // within tie_band of a grid-cell boundary
  std::uint64_t mismatches = 0;
};

// Draws `samples` uniform theta in [-1, 1] and compares argmax |C^H alpha|
// against the closed-form beam index, excluding thetas within tie_band of a
// grid-cell boundary where the maximum is a tie.
BeamOracleResult beam_index_oracle_check(int n_antennas, std::uint64_t samples,
                                         std::uint64_t seed, int threads,
                                         double tie_band = 1e-9);

}  // namespace beamforge

#endif
