#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "beamforge/channel.hpp"
#include "beamforge/codebook.hpp"
#include "beamforge/measurement.hpp"
#include "beamforge/rng.hpp"
#include "doctest.h"

using namespace beamforge;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig cfg;
  cfg.n_antennas = 16;
  cfg.n_rf = 2;
  cfg.n_slots = 4;
  cfg.n_users = 2;
  cfg.n_paths = 2;
  return cfg;
}

double gram_deviation(const ComplexMat& m) {
  // max |M^H M - I| computed independently of hermitian_apply.
  double worst = 0.0;
  for (std::size_t i = 0; i < m.cols; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < m.rows; ++k) {
        acc += std::conj(m.at(k, i)) * m.at(k, j);
      }
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("steering vector closed forms") {
  const ComplexVec flat = steering_vector(4, 0.0);
  for (const Complex& v : flat) CHECK(std::abs(v - Complex{0.5, 0.0}) < 1e-15);

  const ComplexVec alt = steering_vector(2, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(alt[0] - Complex{inv_sqrt2, 0.0}) < 1e-15);
  CHECK(std::abs(alt[1] - Complex{-inv_sqrt2, 0.0}) < 1e-15);

  const ComplexVec quarter = steering_vector(4, 0.5);
  CHECK(std::abs(quarter[0] - Complex{0.5, 0.0}) < 1e-15);
  CHECK(std::abs(quarter[1] - Complex{0.0, 0.5}) < 1e-15);
  CHECK(std::abs(quarter[2] - Complex{-0.5, 0.0}) < 1e-15);
  CHECK(std::abs(quarter[3] - Complex{0.0, -0.5}) < 1e-15);
}

TEST_CASE("steering vector has unit norm for random directions") {
  RngStream rng = derive_stream(1, 0);
  for (int i = 0; i < 50; ++i) {
    const double theta = rng.uniform(-1.0, 1.0);
    CHECK(std::abs(l2_norm(steering_vector(64, theta)) - 1.0) < 1e-12);
  }
}

TEST_CASE("sample_channel is deterministic") {
  const ScenarioConfig cfg = small_config();
  RngStream a = derive_stream(5, 11);
  RngStream b = derive_stream(5, 11);
  const ChannelRealization ca = sample_channel(cfg, a);
  const ChannelRealization cb = sample_channel(cfg, b);
  REQUIRE(ca.h.size() == cb.h.size());
  for (std::size_t u = 0; u < ca.h.size(); ++u) {
    for (std::size_t k = 0; k < ca.h[u].size(); ++k) {
      CHECK(ca.h[u][k] == cb.h[u][k]);
    }
  }
}

TEST_CASE("single unit-gain path yields norm sqrt(N_A)") {
  ScenarioConfig cfg = small_config();
  cfg.n_users = 1;
  cfg.n_paths = 1;
  const ChannelRealization ch = channel_from_paths(
      cfg, {{PathParams{Complex{1.0, 0.0}, 0.3, std::sin(0.3)}}});
  CHECK(std::abs(l2_norm(ch.h[0]) - std::sqrt(16.0)) < 1e-12);
}

TEST_CASE("channel reconstructs from its own paths") {
  const ScenarioConfig cfg = small_config();
  RngStream rng = derive_stream(5, 12);
  const ChannelRealization ch = sample_channel(cfg, rng);
  const ChannelRealization redo = channel_from_paths(cfg, ch.paths);
  for (std::size_t u = 0; u < ch.h.size(); ++u) {
    for (std::size_t k = 0; k < ch.h[u].size(); ++k) {
      CHECK(std::abs(ch.h[u][k] - redo.h[u][k]) < 1e-12);
    }
  }
}

TEST_CASE("mean channel energy matches the path-variance expectation") {
  // E||h||^2 = (N_A/L) * (los_var + (L-1) * nlos_var).
  ScenarioConfig cfg;
  cfg.n_antennas = 256;
  cfg.n_rf = 8;
  cfg.n_slots = 16;
  cfg.n_users = 1;
  cfg.n_paths = 3;
  const double expected = 256.0 / 3.0 * (1.0 + 0.01 * 2.0);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    RngStream rng = derive_stream(77, static_cast<std::uint64_t>(i));
    const ChannelRealization ch = sample_channel(cfg, rng);
    const double norm = l2_norm(ch.h[0]);
    sum += norm * norm;
  }
  CHECK(std::abs(sum / draws - expected) < 0.01 * expected);
}

TEST_CASE("los_beam_index closed form") {
  CHECK(los_beam_index(-1.0, 256) == 1);
  CHECK(los_beam_index(0.0, 256) == 129);
  CHECK(los_beam_index(0.3, 4) == 3);
  CHECK(los_beam_index(1.0, 256) == 256);  // clamp at the upper edge
  CHECK_THROWS_AS(los_beam_index(1.5, 256), std::invalid_argument);
  CHECK_THROWS_AS(los_beam_index(-1.0001, 256), std::invalid_argument);
}

TEST_CASE("codeword closed forms") {
  const ComplexVec w1 = codeword(1, 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(w1[0] - Complex{inv_sqrt2, 0.0}) < 1e-15);
  CHECK(std::abs(w1[1] - Complex{0.0, -inv_sqrt2}) < 1e-15);

  const ComplexVec w3 = codeword(3, 4);
  const ComplexVec ref = steering_vector(4, 0.25);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(w3[k] - ref[k]) < 1e-15);

  CHECK_THROWS_AS(codeword(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(codeword(5, 4), std::invalid_argument);
}

TEST_CASE("codebook is unitary") {
  for (int n : {16, 64}) {
    CHECK(gram_deviation(build_codebook(n)) < 1e-12);
  }
}

TEST_CASE("measurement matrix picks equally spaced codewords") {
  ScenarioConfig cfg;
  cfg.n_antennas = 256;
  cfg.n_rf = 8;
  cfg.n_slots = 16;  // M = 128, stride 2 -> columns 1, 3, ..., 255
  const ComplexMat w = measurement_matrix(cfg);
  REQUIRE(w.cols == 128);
  for (int t = 0; t < 128; ++t) {
    const ComplexVec expect = codeword(1 + 2 * t, 256);
    for (int k = 0; k < 256; ++k) {
      CHECK(std::abs(w.at(k, t) - expect[k]) < 1e-15);
    }
  }

  ScenarioConfig small;
  small.n_antennas = 8;
  small.n_rf = 2;
  small.n_slots = 2;  // M = 4 -> columns 1, 3, 5, 7
  const ComplexMat ws = measurement_matrix(small);
  for (int t = 0; t < 4; ++t) {
    const ComplexVec expect = codeword(1 + 2 * t, 8);
    for (int k = 0; k < 8; ++k) {
      CHECK(std::abs(ws.at(k, t) - expect[k]) < 1e-15);
    }
  }
  CHECK(gram_deviation(ws) < 1e-12);
}

TEST_CASE("scenario validation rejects inconsistent dimensions") {
  ScenarioConfig cfg = small_config();
  cfg.n_slots = 32;  // M = 64 > N_A = 16
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.n_rf = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.n_rf = 3;  // 2M = 24 not divisible by 8
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("beam gain profile: orthonormality on the grid and unit norm") {
  const int n = 4;
  const double on_grid = -1.0 + 1.0 / n;  // center of beam 1
  const ComplexVec beta = beam_gain_profile(on_grid, n);
  CHECK(std::abs(std::abs(beta[0]) - 1.0) < 1e-12);
  for (int k = 1; k < n; ++k) CHECK(std::abs(beta[k]) < 1e-12);

  RngStream rng = derive_stream(2, 0);
  const ComplexMat codebook = build_codebook(64);
  for (int i = 0; i < 20; ++i) {
    const ComplexVec b = beam_gain_profile(rng.uniform(-1.0, 1.0), codebook);
    CHECK(std::abs(l2_norm(b) - 1.0) < 1e-12);
  }
}

TEST_CASE("profile argmax agrees with the closed-form beam index") {
  const BeamOracleResult result = beam_index_oracle_check(64, 20000, 11, 1);
  CHECK(result.mismatches == 0);
  CHECK(result.skipped_ties < 5);
}

TEST_CASE("noiseless on-grid measurement is sqrt(N_A) e_n") {
  ScenarioConfig cfg;
  cfg.n_antennas = 16;
  cfg.n_rf = 4;
  cfg.n_slots = 4;  // M = N_A: W is the full codebook
  cfg.n_users = 1;
  cfg.n_paths = 1;
  const int beam = 5;
  const double theta = -1.0 + (2.0 * beam - 1.0) / 16.0;
  const ChannelRealization ch = channel_from_paths(
      cfg, {{PathParams{Complex{1.0, 0.0}, std::asin(theta), theta}}});
  RngStream rng = derive_stream(1, 1);
  const ComplexVec r =
      synthesize_measurement(ch, measurement_matrix(cfg), 0.0, rng);
  for (int t = 0; t < 16; ++t) {
    const double expect = (t == beam - 1) ? 4.0 : 0.0;
    CHECK(std::abs(r[t] - expect) < 1e-10);
  }
}

TEST_CASE("noiseless measurement is linear in the channel") {
  ScenarioConfig cfg = small_config();
  const ComplexMat w = measurement_matrix(cfg);
  RngStream rng = derive_stream(21, 4);
  const ChannelRealization both = sample_channel(cfg, rng);

  ScenarioConfig solo = cfg;
  solo.n_users = 1;
  const ChannelRealization first = channel_from_paths(solo, {both.paths[0]});
  const ChannelRealization second = channel_from_paths(solo, {both.paths[1]});

  RngStream unused = derive_stream(0, 0);
  const ComplexVec r_both = synthesize_measurement(both, w, 0.0, unused);
  const ComplexVec r1 = synthesize_measurement(first, w, 0.0, unused);
  const ComplexVec r2 = synthesize_measurement(second, w, 0.0, unused);
  for (std::size_t t = 0; t < r_both.size(); ++t) {
    CHECK(std::abs(r_both[t] - (r1[t] + r2[t])) < 1e-12);
  }
}

TEST_CASE("projected noise keeps per-entry variance") {
  ScenarioConfig cfg = small_config();
  cfg.n_users = 1;
  cfg.n_paths = 1;
  const ComplexMat w = measurement_matrix(cfg);
  // Zero channel isolates the noise path.
  const ChannelRealization quiet =
      channel_from_paths(cfg, {{PathParams{Complex{0.0, 0.0}, 0.0, 0.0}}});
  const int draws = 100000;
  const std::size_t m = w.cols;
  std::vector<double> sum_sq(m, 0.0);
  for (int i = 0; i < draws; ++i) {
    RngStream rng = derive_stream(400, static_cast<std::uint64_t>(i));
    const ComplexVec r = synthesize_measurement(quiet, w, 1.0, rng);
    for (std::size_t t = 0; t < m; ++t) sum_sq[t] += std::norm(r[t]);
  }
  for (std::size_t t = 0; t < m; ++t) {
    CHECK(std::abs(sum_sq[t] / draws - 1.0) < 0.02);
  }
}

TEST_CASE("synthesize_measurement rejects negative noise power") {
  ScenarioConfig cfg = small_config();
  RngStream rng = derive_stream(1, 1);
  const ChannelRealization ch = sample_channel(cfg, rng);
  CHECK_THROWS_AS(
      synthesize_measurement(ch, measurement_matrix(cfg), -1.0, rng),
      std::invalid_argument);
}

TEST_CASE("label vector marks each user's LOS beam") {
  ScenarioConfig cfg;
  cfg.n_antennas = 16;
  cfg.n_rf = 2;
  cfg.n_slots = 4;
  cfg.n_users = 2;
  cfg.n_paths = 1;
  auto theta_of_beam = [](int beam, int n) {
    return -1.0 + (2.0 * beam - 1.0) / n;
  };
  const double t5 = theta_of_beam(5, 16);
  const double t9 = theta_of_beam(9, 16);
  const ChannelRealization ch = channel_from_paths(
      cfg, {{PathParams{Complex{1.0, 0.0}, std::asin(t5), t5}},
            {PathParams{Complex{1.0, 0.0}, std::asin(t9), t9}}});
  const std::vector<std::uint8_t> q = label_vector(ch, 16);
  for (int n = 0; n < 16; ++n) {
    CHECK(q[n] == ((n == 4 || n == 8) ? 1 : 0));
  }

  // Duplicate LOS beams collapse to a single set bit.
  const ChannelRealization dup = channel_from_paths(
      cfg, {{PathParams{Complex{1.0, 0.0}, std::asin(t5), t5}},
            {PathParams{Complex{0.5, 0.0}, std::asin(t5), t5}}});
  const std::vector<std::uint8_t> qd = label_vector(dup, 16);
  int ones = 0;
  for (std::uint8_t bit : qd) ones += bit;
  CHECK(ones == 1);
  CHECK(qd[4] == 1);
}

TEST_CASE("label weight never exceeds the user count") {
  ScenarioConfig cfg = small_config();
  for (int i = 0; i < 200; ++i) {
    RngStream rng = derive_stream(31, static_cast<std::uint64_t>(i));
    const ChannelRealization ch = sample_channel(cfg, rng);
    const std::vector<std::uint8_t> q = label_vector(ch, cfg.n_antennas);
    int ones = 0;
    for (std::uint8_t bit : q) ones += bit;
    CHECK(ones <= cfg.n_users);
    CHECK(ones >= 1);
  }
}
