#ifndef BEAMFORGE_TRAINING_HPP
#define BEAMFORGE_TRAINING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "beamforge/conv_net.hpp"
#include "beamforge/dataset.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

struct TrainingConfig {
  std::int64_t epochs = 6000;
  int batches_per_epoch = 500;
  int batch_size = 128;
  double lr_initial = 0.01;
  double lr_decay_factor = 5.0;
  std::int64_t lr_decay_every = 1000;  // epochs
  int validation_every = 10;           // epochs
  std::uint64_t seed = 1;
  Preset preset = Preset::kNps1;
  int threads = 1;
  bool log_timing = true;  // false zeroes the seconds column for byte-stable logs

  void validate() const;
};

// Step schedule: lr_initial / lr_decay_factor^floor(epoch / lr_decay_every).
double learning_rate(const TrainingConfig& cfg, std::int64_t epoch);

struct TrainingLogRow {
  std::int64_t epoch = 0;  // epochs completed when the row was written
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
  double seconds = 0.0;
};

struct TrainOutputs {
  std::string final_checkpoint;  // empty: skip persisting
  std::string best_checkpoint;
  std::string log_csv;
};

struct TrainResult {
  ArchitectureSpec arch;
  NetworkParameters final_params;
  NetworkParameters best_params;
  double best_val_loss = 0.0;
  double final_val_loss = 0.0;
  std::vector<TrainingLogRow> log;
};

// Mean loss over every validation record; parameters are not mutated.
double validate(const NetworkParameters& params, const Dataset& val,
                int threads = 1);

// Full training loop: 9:1 split, Adam updates over random mini-batches,
// periodic validation, best/final checkpoint retention. Deterministic given
// (seed, config, dataset) for any thread count.
TrainResult train(const TrainingConfig& cfg, const ScenarioConfig& scenario,
                  const Dataset& ds, const TrainOutputs& outputs = {});

void write_training_log(const std::vector<TrainingLogRow>& rows,
                        const std::string& path);

}  // namespace beamforge

#endif
