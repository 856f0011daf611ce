#include "beamforge/codebook.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamforge/channel.hpp"
#include "beamforge/rng.hpp"
#include "beamforge/threading.hpp"

namespace beamforge {

int los_beam_index(double theta, int n_antennas) {
  if (!(theta >= -1.0 && theta <= 1.0)) {
    throw std::invalid_argument("los_beam_index: theta " +
                                std::to_string(theta) + " outside [-1, 1]");
  }
  const int idx =
      static_cast<int>(std::floor(n_antennas * (theta + 1.0) / 2.0)) + 1;
  return idx > n_antennas ? n_antennas : idx;
}

ComplexVec codeword(int beam, int n_antennas) {
  if (beam < 1 || beam > n_antennas) {
    throw std::invalid_argument("codeword: beam index " + std::to_string(beam) +
                                " outside [1, " + std::to_string(n_antennas) +
                                "]");
  }
  const double theta = -1.0 + (2.0 * beam - 1.0) / n_antennas;
  return steering_vector(n_antennas, theta);
}

ComplexMat build_codebook(int n_antennas) {
  ComplexMat c(static_cast<std::size_t>(n_antennas),
               static_cast<std::size_t>(n_antennas));
  for (int n = 1; n <= n_antennas; ++n) {
    const ComplexVec w = codeword(n, n_antennas);
    for (int k = 0; k < n_antennas; ++k) {
      c.at(static_cast<std::size_t>(k), static_cast<std::size_t>(n - 1)) = w[k];
    }
  }
  return c;
}

ComplexMat measurement_matrix(const ScenarioConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_antennas;
  const int m = cfg.measured_beams();
  const int stride = n / m;
  ComplexMat w(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    const ComplexVec col = codeword(1 + t * stride, n);
    for (int k = 0; k < n; ++k) {
      w.at(static_cast<std::size_t>(k), static_cast<std::size_t>(t)) = col[k];
    }
  }
  return w;
}

ComplexVec beam_gain_profile(double theta, int n_antennas) {
  return beam_gain_profile(theta, build_codebook(n_antennas));
}

ComplexVec beam_gain_profile(double theta, const ComplexMat& codebook) {
  return hermitian_apply(codebook, steering_vector(
                                       static_cast<int>(codebook.rows), theta));
}

namespace {

// Planar storage of C^H rows for fast repeated |C^H alpha| evaluation.
struct PlanarHermitian {
  int n = 0;
  std::vector<double> re;  // [beam][antenna], conj(codeword) entries
  std::vector<double> im;

  explicit PlanarHermitian(int n_antennas) : n(n_antennas) {
    re.resize(static_cast<std::size_t>(n) * n);
    im.resize(static_cast<std::size_t>(n) * n);
    for (int b = 0; b < n; ++b) {
      const ComplexVec w = codeword(b + 1, n);
      for (int k = 0; k < n; ++k) {
        re[static_cast<std::size_t>(b) * n + k] = w[k].real();
        im[static_cast<std::size_t>(b) * n + k] = -w[k].imag();
      }
    }
  }

  int argmax_gain(const std::vector<double>& a_re,
                  const std::vector<double>& a_im) const {
    int best_beam = 0;
    double best = -1.0;
    for (int b = 0; b < n; ++b) {
      const double* cr = re.data() + static_cast<std::size_t>(b) * n;
      const double* ci = im.data() + static_cast<std::size_t>(b) * n;
      double acc_re = 0.0;
      double acc_im = 0.0;
      for (int k = 0; k < n; ++k) {
        acc_re += cr[k] * a_re[k] - ci[k] * a_im[k];
        acc_im += cr[k] * a_im[k] + ci[k] * a_re[k];
      }
      const double gain = acc_re * acc_re + acc_im * acc_im;
      if (gain > best) {
        best = gain;
        best_beam = b + 1;
      }
    }
    return best_beam;
  }
};

}  // namespace

BeamOracleResult beam_index_oracle_check(int n_antennas, std::uint64_t samples,
                                         std::uint64_t seed, int threads,
                                         double tie_band) {
  const PlanarHermitian ch(n_antennas);
  std::atomic<std::uint64_t> skipped{0};
  std::atomic<std::uint64_t> mismatches{0};
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));

  parallel_for_blocked(samples, 1024, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> a_re(static_cast<std::size_t>(n_antennas));
    std::vector<double> a_im(static_cast<std::size_t>(n_antennas));
    std::uint64_t local_skipped = 0;
    std::uint64_t local_mismatches = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      RngStream rng = derive_stream(seed, i);
      const double theta = rng.uniform(-1.0, 1.0);
      // Ties occur where theta sits on a grid-cell boundary -1 + 2k/N_A.
      const double cells = n_antennas * (theta + 1.0) / 2.0;
      const double dist = std::abs(cells - std::round(cells)) *
                          (2.0 / n_antennas);
      if (dist <= tie_band) {
        ++local_skipped;
        continue;
      }
      for (int k = 0; k < n_antennas; ++k) {
        const double phase = std::numbers::pi * theta * k;
        a_re[k] = scale * std::cos(phase);
        a_im[k] = scale * std::sin(phase);
      }
      const int via_profile = ch.argmax_gain(a_re, a_im);
      if (via_profile != los_beam_index(theta, n_antennas)) ++local_mismatches;
    }
    skipped.fetch_add(local_skipped);
    mismatches.fetch_add(local_mismatches);
  });

  BeamOracleResult r;
  r.samples = samples;
  r.skipped_ties = skipped.load();
  r.mismatches = mismatches.load();
  return r;
}

}  // namespace beamforge
