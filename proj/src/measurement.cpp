#include "beamforge/measurement.hpp"

#include <stdexcept>
#include <string>

#include "beamforge/codebook.hpp"

namespace beamforge {

ComplexVec synthesize_measurement(const ChannelRealization& ch,
                                  const ComplexMat& w, double noise_var,
                                  RngStream& rng) {
  if (noise_var < 0.0) {
    throw std::invalid_argument("synthesize_measurement: negative noise power");
  }
  if (ch.h.empty()) {
    throw std::invalid_argument("synthesize_measurement: empty channel");
  }
  const std::size_t n = ch.h.front().size();
  if (w.rows != n) {
    throw std::invalid_argument(
        "synthesize_measurement: W has " + std::to_string(w.rows) +
        " rows but channel has " + std::to_string(n) + " antennas");
  }

  ComplexVec sum(n, Complex{0.0, 0.0});
  for (const ComplexVec& h : ch.h) {
    for (std::size_t k = 0; k < n; ++k) sum[k] += h[k];
  }
  ComplexVec r = hermitian_apply(w, sum);

  if (noise_var > 0.0) {
    ComplexVec noise(n);
    for (std::size_t k = 0; k < n; ++k) noise[k] = rng.complex_normal(noise_var);
    const ComplexVec projected = hermitian_apply(w, noise);
    for (std::size_t t = 0; t < r.size(); ++t) r[t] += projected[t];
  }
  return r;
}

std::vector<std::uint8_t> label_vector(const ChannelRealization& ch,
                                       int n_antennas) {
  std::vector<std::uint8_t> q(static_cast<std::size_t>(n_antennas), 0);
  for (const auto& user_paths : ch.paths) {
    const int beam = los_beam_index(user_paths.front().theta, n_antennas);
    q[static_cast<std::size_t>(beam - 1)] = 1;
  }
  return q;
}

}  // namespace beamforge
