// beamforge: mmWave beam-alignment simulator and trainer.
// Subcommands: gen, train, eval, gradcheck, oracle-check, plot.
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "beamforge/checkpoint.hpp"
#include "beamforge/codebook.hpp"
#include "beamforge/dataset.hpp"
#include "beamforge/evaluation.hpp"
#include "beamforge/gradcheck.hpp"
#include "beamforge/plot.hpp"
#include "beamforge/run_config.hpp"
#include "beamforge/threading.hpp"
#include "beamforge/training.hpp"

namespace {

using namespace beamforge;

RunConfig resolve_config(const std::string& config_path,
                         const std::optional<std::uint64_t>& seed_flag,
                         int threads_flag) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = load_config_file(config_path);
  // Seed precedence: --seed flag, BEAMFORGE_SEED, config key, default.
  if (seed_flag.has_value()) {
    cfg.seed = *seed_flag;
  } else if (const char* env = std::getenv("BEAMFORGE_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("BEAMFORGE_SEED: expected an integer, got '" +
                                  std::string(env) + "'");
    }
  }
  if (threads_flag > 0) cfg.threads = threads_flag;
  cfg.training.seed = cfg.seed;
  cfg.training.threads = resolve_threads(cfg.threads);
  return cfg;
}

std::vector<double> parse_snr_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3) {
    throw std::invalid_argument("--snr: expected lo:hi:step (dB), got '" +
                                spec + "'");
  }
  if (step <= 0.0) throw std::invalid_argument("--snr: step must be > 0");
  if (hi < lo) throw std::invalid_argument("--snr: hi must be >= lo");
  std::vector<double> grid;
  const int points =
      static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < points; ++i) grid.push_back(lo + i * step);
  return grid;
}

std::string best_checkpoint_path(const std::string& final_path) {
  const auto dot = final_path.rfind('.');
  if (dot == std::string::npos || final_path.find('/', dot) != std::string::npos) {
    return final_path + ".best";
  }
  return final_path.substr(0, dot) + ".best" + final_path.substr(dot);
}

int cmd_gen(const std::string& config_path, std::int64_t count_flag,
            const std::string& out_path,
            const std::optional<std::uint64_t>& seed_flag, int threads_flag) {
  RunConfig cfg = resolve_config(config_path, seed_flag, threads_flag);
  const std::int64_t count = count_flag > 0 ? count_flag : cfg.dataset_count;
  const Dataset ds =
      generate_dataset(cfg.scenario, count, cfg.train_snr_lo_db,
                       cfg.train_snr_hi_db, cfg.seed,
                       resolve_threads(cfg.threads));
  write_dataset(ds, out_path);
  std::printf("wrote %zu records (N_A=%d, M=%d, U=%d) to %s\n",
              ds.records.size(), cfg.scenario.n_antennas,
              cfg.scenario.measured_beams(), cfg.scenario.n_users,
              out_path.c_str());
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_path,
              const std::string& preset_flag, const std::string& out_path,
              const std::string& log_path,
              const std::optional<std::uint64_t>& seed_flag, int threads_flag,
              bool no_timing) {
  RunConfig cfg = resolve_config(config_path, seed_flag, threads_flag);
  if (!preset_flag.empty()) {
    cfg.training.preset = preset_from_name(preset_flag);
  }
  cfg.training.log_timing = !no_timing;

  const Dataset ds = read_dataset(data_path);
  TrainOutputs outputs;
  outputs.final_checkpoint = out_path;
  outputs.best_checkpoint = best_checkpoint_path(out_path);
  outputs.log_csv = log_path;
  const TrainResult result = train(cfg.training, cfg.scenario, ds, outputs);
  std::printf("trained %" PRId64 " epochs (%s): final val loss %.6f, "
              "best val loss %.6f\n",
              cfg.training.epochs, preset_name(cfg.training.preset).c_str(),
              result.final_val_loss, result.best_val_loss);
  std::printf("checkpoints: %s (final), %s (best); log: %s\n", out_path.c_str(),
              outputs.best_checkpoint.c_str(), log_path.c_str());
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& model_path,
             const std::string& snr_spec, std::int64_t trials_flag,
             const std::string& out_path, const std::string& sort_name,
             const std::optional<std::uint64_t>& seed_flag, int threads_flag) {
  RunConfig cfg = resolve_config(config_path, seed_flag, threads_flag);
  std::vector<double> grid;
  if (!snr_spec.empty()) {
    grid = parse_snr_grid(snr_spec);
  } else {
    const int points = static_cast<int>(std::floor(
                           (cfg.eval_snr_hi_db - cfg.eval_snr_lo_db) /
                               cfg.eval_snr_step_db + 1e-9)) + 1;
    for (int i = 0; i < points; ++i) {
      grid.push_back(cfg.eval_snr_lo_db + i * cfg.eval_snr_step_db);
    }
  }
  const std::int64_t trials = trials_flag > 0 ? trials_flag : cfg.eval_trials;
  SortMode mode = SortMode::kValue;
  if (sort_name == "abs") {
    mode = SortMode::kMagnitude;
  } else if (sort_name != "value") {
    throw std::invalid_argument("--sort: expected value or abs");
  }

  const Checkpoint model = load_checkpoint(model_path);
  const EvaluationReport report =
      snr_sweep(model, cfg.scenario, grid, trials, cfg.seed,
                resolve_threads(cfg.threads), mode);
  write_report(report, out_path);
  if (report.shared_beam_trials > 0) {
    std::fprintf(stderr,
                 "note: %" PRIu64 " trial(s) had users sharing a LOS beam; "
                 "their precoders used the distinct-beam subset\n",
                 report.shared_beam_trials);
  }
  std::printf("wrote %zu rows (%zu SNR points x 3 methods, %" PRId64
              " trials each) to %s\n",
              report.rows.size(), grid.size(), trials, out_path.c_str());
  return 0;
}

int cmd_gradcheck(int draws, std::uint64_t seed) {
  const GradCheckResult result =
      run_gradient_check(gradcheck_toy_arch(), draws, seed);
  std::printf("gradient check: %" PRIu64 " components over %d draws, "
              "max relative error %.3e (max abs %.3e)\n",
              result.components, draws, result.max_rel_error,
              result.max_abs_error);
  if (result.max_rel_error >= 1e-6) {
    std::fprintf(stderr, "gradient check FAILED: %.3e >= 1e-6\n",
                 result.max_rel_error);
    return 1;
  }
  return 0;
}

int cmd_oracle_check(std::uint64_t samples, int n_antennas, std::uint64_t seed,
                     int threads) {
  const BeamOracleResult result =
      beam_index_oracle_check(n_antennas, samples, seed, resolve_threads(threads));
  std::printf("beam-index oracle: %" PRIu64 " samples (N_A=%d), %" PRIu64
              " tie(s) skipped, %" PRIu64 " mismatch(es)\n",
              result.samples, n_antennas, result.skipped_ties,
              result.mismatches);
  if (result.mismatches != 0) {
    std::fprintf(stderr, "oracle check FAILED\n");
    return 1;
  }
  return 0;
}

int cmd_plot(const std::string& in_path, const std::string& kind_name,
             const std::string& out_path) {
  render_plot(in_path, plot_kind_from_name(kind_name), out_path);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beamforge: multi-user mmWave beam alignment via a learned "
               "beam distribution vector"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_path, model_path, out_path, log_path, in_path;
  std::string preset_flag, snr_spec, sort_name = "value", kind_name;
  std::int64_t count_flag = 0, trials_flag = 0;
  std::optional<std::uint64_t> seed_flag;
  int threads_flag = 0;
  bool no_timing = false;
  int draws = 20;
  std::uint64_t check_seed = 1;
  std::uint64_t samples = 100000;
  int antennas = 256;

  auto add_seed_threads = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_flag,
                    "master seed (falls back to BEAMFORGE_SEED, then the "
                    "config file)");
    cmd->add_option("--threads", threads_flag,
                    "worker thread cap; 0 = hardware concurrency; results are "
                    "identical for any value");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate an AMPB measurement "
                                            "dataset");
  gen->add_option("--config", config_path, "key = value config file");
  gen->add_option("--count", count_flag, "number of records (default: "
                                         "dataset_count from config)");
  gen->add_option("--out", out_path, "output .ampb path")->required();
  add_seed_threads(gen);

  CLI::App* train_cmd = app.add_subcommand("train", "train the beam "
                                                    "prediction network");
  train_cmd->add_option("--config", config_path, "key = value config file");
  train_cmd->add_option("--data", data_path, "input .ampb dataset")->required();
  train_cmd->add_option("--preset", preset_flag,
                        "network parameter set: nps1 or nps2 (overrides "
                        "config)");
  train_cmd->add_option("--out", out_path, "final checkpoint .ampn path "
                        "(best checkpoint goes to <out>.best.ampn)")
      ->required();
  train_cmd->add_option("--log", log_path, "training log CSV path")->required();
  train_cmd->add_flag("--no-timing", no_timing,
                      "write 0.000 in the seconds column so repeated runs "
                      "produce byte-identical logs");
  add_seed_threads(train_cmd);

  CLI::App* eval_cmd = app.add_subcommand("eval", "SNR sweep: alignment "
                                                  "accuracy and spectral "
                                                  "efficiency");
  eval_cmd->add_option("--config", config_path, "key = value config file");
  eval_cmd->add_option("--model", model_path, "checkpoint .ampn path")
      ->required();
  eval_cmd->add_option("--snr", snr_spec, "sweep grid lo:hi:step in dB "
                       "(default: eval_snr_* from config)");
  eval_cmd->add_option("--trials", trials_flag,
                       "channels per SNR point (default: eval_trials from "
                       "config)");
  eval_cmd->add_option("--out", out_path, "report CSV path")->required();
  eval_cmd->add_option("--sort", sort_name,
                       "beam ranking: value (raw logits) or abs (|logits|)")
      ->default_str("value");
  add_seed_threads(eval_cmd);

  CLI::App* gradcheck_cmd =
      app.add_subcommand("gradcheck", "backprop vs central finite differences "
                                      "on a toy network");
  gradcheck_cmd->add_option("--draws", draws, "random parameter draws")
      ->default_val(20);
  gradcheck_cmd->add_option("--seed", check_seed, "seed for the draws")
      ->default_val(1);

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-check", "argmax |C^H alpha(theta)| vs the closed-form beam "
                      "index");
  oracle_cmd->add_option("--samples", samples, "uniform theta samples")
      ->default_val(100000);
  oracle_cmd->add_option("--antennas", antennas, "array size N_A")
      ->default_val(256);
  oracle_cmd->add_option("--seed", check_seed, "seed for the samples")
      ->default_val(1);
  oracle_cmd->add_option("--threads", threads_flag,
                         "worker thread cap; 0 = hardware concurrency");

  CLI::App* plot_cmd = app.add_subcommand("plot", "render a CSV into a "
                                                  "standalone SVG chart");
  plot_cmd->add_option("--in", in_path, "input CSV (training log or sweep "
                       "report)")
      ->required();
  plot_cmd->add_option("--kind", kind_name, "loss or sweep")->required();
  plot_cmd->add_option("--out", out_path, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_gen(config_path, count_flag, out_path, seed_flag, threads_flag);
    }
    if (train_cmd->parsed()) {
      return cmd_train(config_path, data_path, preset_flag, out_path, log_path,
                       seed_flag, threads_flag, no_timing);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(config_path, model_path, snr_spec, trials_flag, out_path,
                      sort_name, seed_flag, threads_flag);
    }
    if (gradcheck_cmd->parsed()) return cmd_gradcheck(draws, check_seed);
    if (oracle_cmd->parsed()) {
      return cmd_oracle_check(samples, antennas, check_seed, threads_flag);
    }
    if (plot_cmd->parsed()) return cmd_plot(in_path, kind_name, out_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
