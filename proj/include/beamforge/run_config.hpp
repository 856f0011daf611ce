#ifndef BEAMFORGE_RUN_CONFIG_HPP
#define BEAMFORGE_RUN_CONFIG_HPP

#include <cstdint>
#include <string>

#include "beamforge/scenario.hpp"
#include "beamforge/training.hpp"

namespace beamforge {

// Flat key = value configuration covering the scenario, training schedule,
// dataset generation, and evaluation sweep defaults. Unknown keys are
// rejected; every constraint violation names the key (and line when it came
// from a file).
struct RunConfig {
  ScenarioConfig scenario;
  TrainingConfig training;

  std::int64_t dataset_count = 100000;
  double train_snr_lo_db = -10.0;
  double train_snr_hi_db = 10.0;

  double eval_snr_lo_db = -10.0;
  double eval_snr_hi_db = 10.0;
  double eval_snr_step_db = 5.0;
  std::int64_t eval_trials = 1000;

  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

// Parses `key = value` lines with '#' comments. Empty text yields the
// defaults above.
RunConfig parse_config(const std::string& text);

// Reads and parses a config file; errors mention the path.
RunConfig load_config_file(const std::string& path);

}  // namespace beamforge

#endif
