#include "beamforge/scenario.hpp"

#include <stdexcept>
#include <string>

namespace beamforge {

void ScenarioConfig::validate() const {
  if (n_rf < 1) {
    throw std::invalid_argument("n_rf: must be >= 1, got " +
                                std::to_string(n_rf));
  }
  if (n_antennas < n_rf) {
    throw std::invalid_argument(
        "n_antennas: must be >= n_rf, got n_antennas=" +
        std::to_string(n_antennas) + ", n_rf=" + std::to_string(n_rf));
  }
  if (n_slots < 1) {
    throw std::invalid_argument("n_slots: must be >= 1, got " +
                                std::to_string(n_slots));
  }
  if (n_users < 1) {
    throw std::invalid_argument("n_users: must be >= 1, got " +
                                std::to_string(n_users));
  }
  if (n_paths < 1) {
    throw std::invalid_argument("n_paths: must be >= 1, got " +
                                std::to_string(n_paths));
  }
  if (measured_beams() > n_antennas) {
    throw std::invalid_argument(
        "n_slots: measured beams n_slots*n_rf=" +
        std::to_string(measured_beams()) + " exceed n_antennas=" +
        std::to_string(n_antennas));
  }
  if (input_length() % 8 != 0) {
    throw std::invalid_argument(
        "n_slots: network input 2*n_slots*n_rf=" +
        std::to_string(input_length()) +
        " must be divisible by 8 (three pool-by-2 stages)");
  }
  if (los_gain_var < 0.0) {
    throw std::invalid_argument("los_gain_var: must be >= 0");
  }
  if (nlos_gain_var < 0.0) {
    throw std::invalid_argument("nlos_gain_var: must be >= 0");
  }
}

}  // namespace beamforge
