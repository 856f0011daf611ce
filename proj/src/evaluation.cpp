#include "beamforge/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "beamforge/codebook.hpp"
#include "beamforge/dataset.hpp"
#include "beamforge/loss.hpp"
#include "beamforge/measurement.hpp"
#include "beamforge/threading.hpp"

namespace beamforge {

BeamPrediction predict_beams(const std::vector<double>& logits, int n_users,
                             SortMode mode) {
  const int n = static_cast<int>(logits.size());
  if (n_users < 1 || n_users > n) {
    throw std::invalid_argument("predict_beams: need 1 <= U <= " +
                                std::to_string(n) + ", got U=" +
                                std::to_string(n_users));
  }
  BeamPrediction pred;
  pred.order.resize(static_cast<std::size_t>(n));
  std::iota(pred.order.begin(), pred.order.end(), 1);
  auto key = [&](int beam) {
    const double v = logits[static_cast<std::size_t>(beam - 1)];
    return mode == SortMode::kMagnitude ? std::abs(v) : v;
  };
  std::stable_sort(pred.order.begin(), pred.order.end(),
                   [&](int a, int b) { return key(a) > key(b); });
  pred.beams.assign(pred.order.begin(), pred.order.begin() + n_users);
  return pred;
}

std::vector<int> genie_beams(const ChannelRealization& ch, int n_antennas) {
  std::vector<int> beams;
  beams.reserve(ch.paths.size());
  for (const auto& user_paths : ch.paths) {
    beams.push_back(los_beam_index(user_paths.front().theta, n_antennas));
  }
  return beams;
}

PrecoderPair build_precoders(const std::vector<int>& beams, int n_antennas) {
  const std::size_t u = beams.size();
  if (u == 0) throw std::invalid_argument("build_precoders: no beams");
  for (std::size_t i = 0; i < u; ++i) {
    for (std::size_t j = i + 1; j < u; ++j) {
      if (beams[i] == beams[j]) {
        throw std::invalid_argument(
            "build_precoders: duplicate beam index " +
            std::to_string(beams[i]) + " (singular Gram matrix)");
      }
    }
  }

  PrecoderPair pre;
  pre.analog = ComplexMat(static_cast<std::size_t>(n_antennas), u);
  for (std::size_t c = 0; c < u; ++c) {
    const ComplexVec w = codeword(beams[c], n_antennas);
    for (int k = 0; k < n_antennas; ++k) {
      pre.analog.at(static_cast<std::size_t>(k), c) = w[k];
    }
  }

  ComplexMat gram(u, u);
  for (std::size_t i = 0; i < u; ++i) {
    for (std::size_t j = 0; j < u; ++j) {
      Complex acc{0.0, 0.0};
      for (int k = 0; k < n_antennas; ++k) {
        acc += std::conj(pre.analog.at(static_cast<std::size_t>(k), i)) *
               pre.analog.at(static_cast<std::size_t>(k), j);
      }
      gram.at(i, j) = acc;
    }
  }
  pre.digital = small_inverse(gram);

  // Column normalization: ||w_Bu^H W_R^H||_2 = ||W_R w_Bu||_2 = 1.
  for (std::size_t c = 0; c < u; ++c) {
    double norm_sq = 0.0;
    for (int k = 0; k < n_antennas; ++k) {
      Complex acc{0.0, 0.0};
      for (std::size_t j = 0; j < u; ++j) {
        acc += pre.analog.at(static_cast<std::size_t>(k), j) *
               pre.digital.at(j, c);
      }
      norm_sq += std::norm(acc);
    }
    const double norm = std::sqrt(norm_sq);
    for (std::size_t j = 0; j < u; ++j) pre.digital.at(j, c) /= norm;
  }
  return pre;
}

namespace {

// Effective row for one digital column: (W_R w_Bc)^H, length N_A.
ComplexVec effective_row(const PrecoderPair& pre, std::size_t col) {
  const std::size_t n = pre.analog.rows;
  const std::size_t u = pre.analog.cols;
  ComplexVec row(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < u; ++j) {
      acc += pre.analog.at(k, j) * pre.digital.at(j, col);
    }
    row[k] = std::conj(acc);
  }
  return row;
}

double sum_rate_from_rows(const std::vector<ComplexVec>& user_rows,
                          const ChannelRealization& ch, double noise_var) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("spectral_efficiency: noise power must be > 0");
  }
  const std::size_t n_users = ch.h.size();
  if (user_rows.size() != n_users) {
    throw std::invalid_argument("spectral_efficiency: precoder width does not "
                                "match user count");
  }
  const double power_share = 1.0 / static_cast<double>(n_users);

  double rate = 0.0;
  for (std::size_t u = 0; u < n_users; ++u) {
    double signal = 0.0;
    double interference = 0.0;
    for (std::size_t i = 0; i < n_users; ++i) {
      Complex acc{0.0, 0.0};
      const ComplexVec& row = user_rows[i];
      const ComplexVec& h = ch.h[u];
      for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * h[k];
      const double p = std::norm(acc);
      if (i == u) {
        signal = power_share * p;
      } else {
        interference += power_share * p;
      }
    }
    rate += std::log2(1.0 + signal / (interference + noise_var));
  }
  return rate;
}

}  // namespace

double spectral_efficiency(const ChannelRealization& ch, const PrecoderPair& pre,
                           double noise_var) {
  if (pre.analog.cols != ch.h.size()) {
    throw std::invalid_argument("spectral_efficiency: precoder width does not "
                                "match user count");
  }
  std::vector<ComplexVec> rows;
  rows.reserve(pre.analog.cols);
  for (std::size_t c = 0; c < pre.analog.cols; ++c) {
    rows.push_back(effective_row(pre, c));
  }
  return sum_rate_from_rows(rows, ch, noise_var);
}

double sum_rate_for_beams(const ChannelRealization& ch,
                          const std::vector<int>& per_user_beams,
                          double noise_var, bool* shared_beams) {
  if (per_user_beams.size() != ch.h.size()) {
    throw std::invalid_argument("sum_rate_for_beams: one beam per user "
                                "required");
  }
  if (ch.h.empty()) throw std::invalid_argument("sum_rate_for_beams: no users");
  const int n_antennas = static_cast<int>(ch.h.front().size());

  // Distinct beams in first-occurrence order; duplicated analog columns are
  // excluded from the zero-forcing inverse.
  std::vector<int> distinct;
  std::vector<std::size_t> user_col(per_user_beams.size());
  for (std::size_t u = 0; u < per_user_beams.size(); ++u) {
    const auto it =
        std::find(distinct.begin(), distinct.end(), per_user_beams[u]);
    if (it == distinct.end()) {
      user_col[u] = distinct.size();
      distinct.push_back(per_user_beams[u]);
    } else {
      user_col[u] = static_cast<std::size_t>(it - distinct.begin());
    }
  }
  if (shared_beams != nullptr) {
    *shared_beams = distinct.size() != per_user_beams.size();
  }

  const PrecoderPair pre = build_precoders(distinct, n_antennas);
  std::vector<ComplexVec> rows;
  rows.reserve(per_user_beams.size());
  for (std::size_t u = 0; u < per_user_beams.size(); ++u) {
    rows.push_back(effective_row(pre, user_col[u]));
  }
  return sum_rate_from_rows(rows, ch, noise_var);
}

std::vector<int> assign_beams_to_users(const std::vector<int>& beams,
                                       const ChannelRealization& ch) {
  const std::size_t n_users = ch.h.size();
  if (beams.size() != n_users) {
    throw std::invalid_argument("assign_beams_to_users: beam count must equal "
                                "user count");
  }
  if (ch.h.empty()) return {};
  const int n_antennas = static_cast<int>(ch.h.front().size());

  // |codeword(b)^H h_u|^2 for every pair.
  std::vector<std::vector<double>> gain(n_users,
                                        std::vector<double>(beams.size(), 0.0));
  for (std::size_t k = 0; k < beams.size(); ++k) {
    const ComplexVec w = codeword(beams[k], n_antennas);
    for (std::size_t u = 0; u < n_users; ++u) {
      Complex acc{0.0, 0.0};
      for (int a = 0; a < n_antennas; ++a) {
        acc += std::conj(w[a]) * ch.h[u][a];
      }
      gain[u][k] = std::norm(acc);
    }
  }

  std::vector<int> per_user(n_users, 0);
  std::vector<bool> user_done(n_users, false);
  std::vector<bool> beam_done(beams.size(), false);
  for (std::size_t round = 0; round < n_users; ++round) {
    double best = -1.0;
    std::size_t best_u = 0;
    std::size_t best_k = 0;
    for (std::size_t u = 0; u < n_users; ++u) {
      if (user_done[u]) continue;
      for (std::size_t k = 0; k < beams.size(); ++k) {
        if (beam_done[k]) continue;
        const bool better =
            gain[u][k] > best ||
            (gain[u][k] == best &&
             (u < best_u || (u == best_u && beams[k] < beams[best_k])));
        if (better) {
          best = gain[u][k];
          best_u = u;
          best_k = k;
        }
      }
    }
    per_user[best_u] = beams[best_k];
    user_done[best_u] = true;
    beam_done[best_k] = true;
  }
  return per_user;
}

double alignment_accuracy(const std::vector<int>& predicted,
                          const std::vector<int>& true_beams) {
  if (true_beams.empty()) {
    throw std::invalid_argument("alignment_accuracy: empty truth");
  }
  std::map<int, int> counts;
  for (int b : true_beams) counts[b] += 1;
  int matched = 0;
  for (int b : predicted) {
    auto it = counts.find(b);
    if (it != counts.end() && it->second > 0) {
      it->second -= 1;
      ++matched;
    }
  }
  return static_cast<double>(matched) / static_cast<double>(true_beams.size());
}

std::vector<TrialMetrics> run_trials(const Checkpoint& model,
                                     const ScenarioConfig& cfg, double snr_db,
                                     std::int64_t trials, std::uint64_t seed,
                                     std::uint64_t stream_base, int threads,
                                     SortMode mode) {
  cfg.validate();
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  if (model.arch.input_len != cfg.input_length() ||
      model.arch.output_dim != cfg.n_antennas) {
    throw std::runtime_error(
        "checkpoint dimensions (input " + std::to_string(model.arch.input_len) +
        ", output " + std::to_string(model.arch.output_dim) +
        ") do not match the scenario (input " +
        std::to_string(cfg.input_length()) + ", output " +
        std::to_string(cfg.n_antennas) + ")");
  }

  const ComplexMat w = measurement_matrix(cfg);
  const double noise_var = std::pow(10.0, -snr_db / 10.0);
  std::vector<TrialMetrics> metrics(static_cast<std::size_t>(trials));

  parallel_for_blocked(
      static_cast<std::size_t>(trials), 64, threads,
      [&](std::size_t lo, std::size_t hi) {
        ForwardCache cache;
        for (std::size_t t = lo; t < hi; ++t) {
          RngStream rng = derive_stream(seed, stream_base + t);
          const ChannelRealization ch = sample_channel(cfg, rng);
          const ComplexVec r = synthesize_measurement(ch, w, noise_var, rng);
          const std::vector<int> truth = genie_beams(ch, cfg.n_antennas);
          TrialMetrics& out = metrics[t];

          // NN prediction from the measurement.
          const std::vector<double>& logits =
              network_forward(encode_input(r), model.params, cache);
          const BeamPrediction pred = predict_beams(logits, cfg.n_users, mode);
          const std::vector<int> nn_user_beams =
              assign_beams_to_users(pred.beams, ch);
          out.nn_accuracy = alignment_accuracy(pred.beams, truth);
          out.nn_rate = sum_rate_for_beams(ch, nn_user_beams, noise_var);

          // Genie: the true per-user beams.
          out.genie_accuracy = alignment_accuracy(truth, truth);
          out.genie_rate = sum_rate_for_beams(ch, truth, noise_var,
                                              &out.shared_genie_beams);

          // Random baseline: U distinct beams, uniformly.
          std::vector<int> random_beams;
          const std::size_t n = static_cast<std::size_t>(cfg.n_antennas);
          const std::size_t u = static_cast<std::size_t>(cfg.n_users);
          std::vector<std::uint8_t> seen(n, 0);
          for (std::size_t j = n - u; j < n; ++j) {
            const std::size_t pick = rng.bounded(j + 1);
            if (!seen[pick]) {
              seen[pick] = 1;
              random_beams.push_back(static_cast<int>(pick) + 1);
            } else {
              seen[j] = 1;
              random_beams.push_back(static_cast<int>(j) + 1);
            }
          }
          const std::vector<int> random_user_beams =
              assign_beams_to_users(random_beams, ch);
          out.random_accuracy = alignment_accuracy(random_beams, truth);
          out.random_rate = sum_rate_for_beams(ch, random_user_beams, noise_var);
        }
      });
  return metrics;
}

EvaluationReport snr_sweep(const Checkpoint& model, const ScenarioConfig& cfg,
                           const std::vector<double>& snr_grid_db,
                           std::int64_t trials, std::uint64_t seed, int threads,
                           SortMode mode) {
  if (snr_grid_db.empty()) {
    throw std::invalid_argument("snr_sweep: empty SNR grid");
  }
  EvaluationReport report;
  for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
    const std::uint64_t base =
        kStreamSweepBase + static_cast<std::uint64_t>(si) *
                               static_cast<std::uint64_t>(trials);
    const std::vector<TrialMetrics> metrics = run_trials(
        model, cfg, snr_grid_db[si], trials, seed, base, threads, mode);

    double acc_nn = 0.0, rate_nn = 0.0;
    double acc_genie = 0.0, rate_genie = 0.0;
    double acc_random = 0.0, rate_random = 0.0;
    for (const TrialMetrics& m : metrics) {
      acc_nn += m.nn_accuracy;
      rate_nn += m.nn_rate;
      acc_genie += m.genie_accuracy;
      rate_genie += m.genie_rate;
      acc_random += m.random_accuracy;
      rate_random += m.random_rate;
      if (m.shared_genie_beams) ++report.shared_beam_trials;
    }
    const double inv = 1.0 / static_cast<double>(trials);
    // Rows ordered by (snr, method), methods alphabetical.
    report.rows.push_back({snr_grid_db[si], "genie", acc_genie * inv,
                           rate_genie * inv, trials});
    report.rows.push_back(
        {snr_grid_db[si], "nn", acc_nn * inv, rate_nn * inv, trials});
    report.rows.push_back({snr_grid_db[si], "random", acc_random * inv,
                           rate_random * inv, trials});
  }
  return report;
}

void write_report(const EvaluationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << "snr_db,method,accuracy,spectral_efficiency,trials\n";
  char buf[160];
  for (const EvalRow& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g,%lld\n", r.snr_db,
                  r.method.c_str(), r.accuracy, r.spectral_efficiency,
                  static_cast<long long>(r.trials));
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed on '" + path + "'");
}

}  // namespace beamforge
