#ifndef BEAMFORGE_EVALUATION_HPP
#define BEAMFORGE_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "beamforge/channel.hpp"
#include "beamforge/checkpoint.hpp"
#include "beamforge/core_math.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

// Logits sort order for beam selection. kValue ranks by the raw logit (the
// reading consistent with the sigmoid loss); kMagnitude ranks by |logit| for
// fidelity experiments.
enum class SortMode { kValue, kMagnitude };

struct BeamPrediction {
  std::vector<int> beams;  // U distinct 1-based indices, best first
  std::vector<int> order;  // full argsort of the logits, 1-based
};

// Top-U beams by sorted logit order; ties break toward the lower index.
BeamPrediction predict_beams(const std::vector<double>& logits, int n_users,
                             SortMode mode = SortMode::kValue);

// True LOS beam index per user (duplicates kept per-user).
std::vector<int> genie_beams(const ChannelRealization& ch, int n_antennas);

// Analog codeword columns plus the normalized zero-forcing digital precoder.
struct PrecoderPair {
  ComplexMat analog;   // N_A x U
  ComplexMat digital;  // U x U, columns normalized
};

// W_R columns are the codewords of `beams` (must be distinct);
// W_B = (W_R^H W_R)^{-1} with each column scaled so ||w_Bu^H W_R^H||_2 = 1.
PrecoderPair build_precoders(const std::vector<int>& beams, int n_antennas);

// Sum rate with column u serving user u:
//   R = sum_u log2(1 + (1/U)|w_Bu^H W_R^H h_u|^2 /
//                      ((1/U) sum_{i!=u} |w_Bi^H W_R^H h_u|^2 + noise_var)).
double spectral_efficiency(const ChannelRealization& ch, const PrecoderPair& pre,
                           double noise_var);

// Sum rate for an explicit per-user beam list. Duplicate beams (users sharing
// a LOS grid cell) are handled by building the precoder on the distinct
// subset; `shared_beams` reports whether that happened.
double sum_rate_for_beams(const ChannelRealization& ch,
                          const std::vector<int>& per_user_beams,
                          double noise_var, bool* shared_beams = nullptr);

// Greedy max-gain matching of predicted beams to users; deterministic
// tie-break toward the lower (user, beam) pair. Returns one beam per user.
std::vector<int> assign_beams_to_users(const std::vector<int>& beams,
                                       const ChannelRealization& ch);

// Multiplicity-aware overlap |b_hat ∩ true| / U.
double alignment_accuracy(const std::vector<int>& predicted,
                          const std::vector<int>& true_beams);

struct TrialMetrics {
  double nn_accuracy = 0.0;
  double nn_rate = 0.0;
  double genie_accuracy = 0.0;
  double genie_rate = 0.0;
  double random_accuracy = 0.0;
  double random_rate = 0.0;
  bool shared_genie_beams = false;
};

// Per-trial evaluation at one SNR; trial t draws from
// derive_stream(seed, stream_base + t). All three methods share the trial's
// channel and measurement.
std::vector<TrialMetrics> run_trials(const Checkpoint& model,
                                     const ScenarioConfig& cfg, double snr_db,
                                     std::int64_t trials, std::uint64_t seed,
                                     std::uint64_t stream_base, int threads,
                                     SortMode mode = SortMode::kValue);

struct EvalRow {
  double snr_db = 0.0;
  std::string method;  // "genie", "nn", "random"
  double accuracy = 0.0;
  double spectral_efficiency = 0.0;
  std::int64_t trials = 0;
};

struct EvaluationReport {
  std::vector<EvalRow> rows;  // ordered by (snr, method)
  std::uint64_t shared_beam_trials = 0;
};

EvaluationReport snr_sweep(const Checkpoint& model, const ScenarioConfig& cfg,
                           const std::vector<double>& snr_grid_db,
                           std::int64_t trials, std::uint64_t seed, int threads,
                           SortMode mode = SortMode::kValue);

// CSV with header snr_db,method,accuracy,spectral_efficiency,trials.
void write_report(const EvaluationReport& report, const std::string& path);

}  // namespace beamforge

#endif
