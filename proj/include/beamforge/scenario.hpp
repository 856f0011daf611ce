#ifndef BEAMFORGE_SCENARIO_HPP
#define BEAMFORGE_SCENARIO_HPP

namespace beamforge {

// Physical-layer dimensions and channel statistics for one simulated cell.
// Defaults follow the reference setup: 256-antenna base station with 8 RF
// chains, 16 training slots, 3 users, 3 paths per user.
struct ScenarioConfig {
  int n_antennas = 256;  // N_A
  int n_rf = 8;          // N_R
  int n_slots = 16;      // J
  int n_users = 3;       // U
  int n_paths = 3;       // L, first path is LOS
  double los_gain_var = 1.0;
  double nlos_gain_var = 0.01;

  // M: beams measured during training (J * N_R).
  int measured_beams() const { return n_slots * n_rf; }

  // Network input length: real+imaginary parts of the M measurements.
  int input_length() const { return 2 * measured_beams(); }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

}  // namespace beamforge

#endif
