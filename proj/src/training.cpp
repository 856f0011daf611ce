#include "beamforge/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "beamforge/adam.hpp"
#include "beamforge/checkpoint.hpp"
#include "beamforge/loss.hpp"
#include "beamforge/threading.hpp"

namespace beamforge {

void TrainingConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("epochs: must be >= 0");
  if (batches_per_epoch < 1) {
    throw std::invalid_argument("batches_per_epoch: must be >= 1");
  }
  if (batch_size < 1) throw std::invalid_argument("batch_size: must be >= 1");
  if (!(lr_initial > 0.0)) {
    throw std::invalid_argument("lr_initial: must be > 0");
  }
  if (!(lr_decay_factor > 0.0)) {
    throw std::invalid_argument("lr_decay_factor: must be > 0");
  }
  if (lr_decay_every < 1) {
    throw std::invalid_argument("lr_decay_every: must be >= 1");
  }
  if (validation_every < 1) {
    throw std::invalid_argument("validation_every: must be >= 1");
  }
}

double learning_rate(const TrainingConfig& cfg, std::int64_t epoch) {
  if (epoch < 0) throw std::invalid_argument("learning_rate: negative epoch");
  const std::int64_t drops = epoch / cfg.lr_decay_every;
  double divisor = 1.0;
  for (std::int64_t i = 0; i < drops; ++i) divisor *= cfg.lr_decay_factor;
  return cfg.lr_initial / divisor;
}

double validate(const NetworkParameters& params, const Dataset& val,
                int threads) {
  const std::size_t n = val.records.size();
  if (n == 0) throw std::invalid_argument("validate: empty validation set");
  const int n_antennas = val.n_antennas;

  std::vector<double> losses(n, 0.0);
  parallel_for_blocked(n, 256, threads, [&](std::size_t lo, std::size_t hi) {
    ForwardCache cache;
    std::vector<double> labels(static_cast<std::size_t>(n_antennas));
    for (std::size_t i = lo; i < hi; ++i) {
      const std::vector<double> x = encode_record(val.records[i]);
      record_labels(val.records[i], n_antennas, labels.data());
      losses[i] = sigmoid_ce_loss(network_forward(x, params, cache), labels);
    }
  });

  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(n);
}

namespace {

// Samples are reduced in fixed blocks of 16 so the floating-point sum order
// is identical for every thread count.
constexpr std::size_t kGradBlock = 16;

void accumulate(NetworkParameters& into, const NetworkParameters& from) {
  for (int s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < into.conv[s].w.size(); ++i) {
      into.conv[s].w[i] += from.conv[s].w[i];
    }
    for (std::size_t i = 0; i < into.conv[s].b.size(); ++i) {
      into.conv[s].b[i] += from.conv[s].b[i];
    }
  }
  for (std::size_t i = 0; i < into.fc.w.size(); ++i) {
    into.fc.w[i] += from.fc.w[i];
  }
  for (std::size_t i = 0; i < into.fc.b.size(); ++i) {
    into.fc.b[i] += from.fc.b[i];
  }
}

void zero_params(NetworkParameters& p) {
  p.for_each_array([](std::vector<double>& a) {
    std::fill(a.begin(), a.end(), 0.0);
  });
}

void scale_params(NetworkParameters& p, double s) {
  p.for_each_array([s](std::vector<double>& a) {
    for (double& v : a) v *= s;
  });
}

}  // namespace

TrainResult train(const TrainingConfig& cfg, const ScenarioConfig& scenario,
                  const Dataset& ds, const TrainOutputs& outputs) {
  cfg.validate();
  scenario.validate();
  ds.check_matches(scenario);

  const int input_len = scenario.input_length();
  const int n_antennas = scenario.n_antennas;
  ArchitectureSpec arch;
  switch (cfg.preset) {
    case Preset::kNps1:
      arch = ArchitectureSpec::nps1(input_len, n_antennas);
      break;
    case Preset::kNps2:
      arch = ArchitectureSpec::nps2(input_len, n_antennas);
      break;
    default:
      throw std::invalid_argument("train: preset must be nps1 or nps2");
  }

  auto [train_set, val_set] = split_train_val(ds, cfg.seed);
  if (cfg.batch_size > static_cast<int>(train_set.records.size())) {
    throw std::invalid_argument("train: batch_size exceeds training set size");
  }

  RngStream init_rng = derive_stream(cfg.seed, kStreamInit);
  NetworkParameters params = init_params(arch, init_rng);
  AdamState adam = AdamState::zeros_like(arch);
  RngStream batch_rng = derive_stream(cfg.seed, kStreamBatch);

  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
  const std::size_t blocks = (batch + kGradBlock - 1) / kGradBlock;
  std::vector<NetworkParameters> block_grads(
      blocks, NetworkParameters::zeros(arch));
  std::vector<NetworkParameters> block_scratch(
      blocks, NetworkParameters::zeros(arch));
  std::vector<ForwardCache> block_caches(blocks);
  NetworkParameters grads = NetworkParameters::zeros(arch);

  std::vector<double> inputs;
  std::vector<double> labels;
  std::vector<double> sample_losses(batch, 0.0);

  TrainResult result;
  result.arch = arch;
  double best_val = std::numeric_limits<double>::infinity();
  NetworkParameters best_params = params;

  const auto start = std::chrono::steady_clock::now();
  for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = learning_rate(cfg, epoch);
    double epoch_loss_sum = 0.0;

    for (int b = 0; b < cfg.batches_per_epoch; ++b) {
      next_minibatch(train_set, batch_rng, cfg.batch_size, inputs, labels);

      parallel_for(blocks, cfg.threads, [&](std::size_t blk) {
        const std::size_t lo = blk * kGradBlock;
        const std::size_t hi = std::min(batch, lo + kGradBlock);
        NetworkParameters& acc = block_grads[blk];
        NetworkParameters& scratch = block_scratch[blk];
        ForwardCache& cache = block_caches[blk];
        zero_params(acc);
        std::vector<double> x(static_cast<std::size_t>(input_len));
        std::vector<double> y(static_cast<std::size_t>(n_antennas));
        for (std::size_t i = lo; i < hi; ++i) {
          std::copy_n(inputs.begin() + i * input_len, input_len, x.begin());
          std::copy_n(labels.begin() + i * n_antennas, n_antennas, y.begin());
          const std::vector<double>& logits = network_forward(x, params, cache);
          sample_losses[i] = sigmoid_ce_loss(logits, y);
          network_backward(cache, params, y, scratch);
          accumulate(acc, scratch);
        }
      });

      zero_params(grads);
      for (std::size_t blk = 0; blk < blocks; ++blk) {
        accumulate(grads, block_grads[blk]);
      }
      scale_params(grads, 1.0 / static_cast<double>(batch));
      adam_step(params, grads, adam, lr);

      double batch_loss = 0.0;
      for (std::size_t i = 0; i < batch; ++i) batch_loss += sample_losses[i];
      epoch_loss_sum += batch_loss / static_cast<double>(batch);
    }

    const bool last_epoch = (epoch + 1 == cfg.epochs);
    if ((epoch + 1) % cfg.validation_every == 0 || last_epoch) {
      const double train_loss =
          epoch_loss_sum / static_cast<double>(cfg.batches_per_epoch);
      const double val_loss = validate(params, val_set, cfg.threads);
      TrainingLogRow row;
      row.epoch = epoch + 1;
      row.train_loss = train_loss;
      row.val_loss = val_loss;
      row.lr = lr;
      row.seconds =
          cfg.log_timing
              ? std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count()
              : 0.0;
      result.log.push_back(row);
      if (val_loss < best_val) {
        best_val = val_loss;
        best_params = params;
      }
      result.final_val_loss = val_loss;
    }
  }

  if (cfg.epochs == 0) {
    best_val = validate(params, val_set, cfg.threads);
    best_params = params;
    result.final_val_loss = best_val;
  }

  result.final_params = std::move(params);
  result.best_params = std::move(best_params);
  result.best_val_loss = best_val;

  if (!outputs.final_checkpoint.empty()) {
    save_checkpoint(result.final_params, arch, outputs.final_checkpoint);
  }
  if (!outputs.best_checkpoint.empty()) {
    save_checkpoint(result.best_params, arch, outputs.best_checkpoint);
  }
  if (!outputs.log_csv.empty()) {
    write_training_log(result.log, outputs.log_csv);
  }
  return result;
}

void write_training_log(const std::vector<TrainingLogRow>& rows,
                        const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << "epoch,train_loss,val_loss,lr,seconds\n";
  char buf[160];
  for (const TrainingLogRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.3f\n",
                  static_cast<long long>(r.epoch), r.train_loss, r.val_loss,
                  r.lr, r.seconds);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed on '" + path + "'");
}

}  // namespace beamforge
