#include "beamforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "beamforge/binary_io.hpp"
#include "beamforge/channel.hpp"
#include "beamforge/codebook.hpp"
#include "beamforge/measurement.hpp"
#include "beamforge/threading.hpp"

namespace beamforge {

void Dataset::check_matches(const ScenarioConfig& cfg) const {
  if (n_antennas != cfg.n_antennas || n_rf != cfg.n_rf ||
      n_slots != cfg.n_slots || n_users != cfg.n_users ||
      n_paths != cfg.n_paths) {
    throw std::runtime_error(
        "dataset dimensions (N_A=" + std::to_string(n_antennas) + ", N_R=" +
        std::to_string(n_rf) + ", J=" + std::to_string(n_slots) + ", U=" +
        std::to_string(n_users) + ", L=" + std::to_string(n_paths) +
        ") do not match the scenario");
  }
}

Dataset generate_dataset(const ScenarioConfig& cfg, std::int64_t count,
                         double snr_lo_db, double snr_hi_db,
                         std::uint64_t master_seed, int threads) {
  cfg.validate();
  if (count < 1) {
    throw std::invalid_argument("generate_dataset: count must be >= 1");
  }
  if (snr_lo_db > snr_hi_db) {
    throw std::invalid_argument("generate_dataset: snr range lo > hi");
  }

  const ComplexMat w = measurement_matrix(cfg);
  Dataset ds;
  ds.n_antennas = static_cast<std::uint16_t>(cfg.n_antennas);
  ds.n_rf = static_cast<std::uint16_t>(cfg.n_rf);
  ds.n_slots = static_cast<std::uint16_t>(cfg.n_slots);
  ds.n_users = static_cast<std::uint16_t>(cfg.n_users);
  ds.n_paths = static_cast<std::uint16_t>(cfg.n_paths);
  ds.records.resize(static_cast<std::size_t>(count));

  parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
    RngStream rng = derive_stream(master_seed, i);
    const ChannelRealization ch = sample_channel(cfg, rng);
    const double snr_db = rng.uniform(snr_lo_db, snr_hi_db);
    const double noise_var = std::pow(10.0, -snr_db / 10.0);
    const ComplexVec r = synthesize_measurement(ch, w, noise_var, rng);

    MeasurementRecord rec;
    rec.r.resize(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) {
      rec.r[t] = std::complex<float>(static_cast<float>(r[t].real()),
                                     static_cast<float>(r[t].imag()));
    }
    // Beams derive from the stored (quantized) thetas so each record is
    // self-consistent at file precision.
    std::vector<std::pair<std::uint16_t, float>> beams;
    beams.reserve(ch.paths.size());
    for (const auto& user_paths : ch.paths) {
      const float theta = static_cast<float>(user_paths.front().theta);
      const int beam = los_beam_index(static_cast<double>(theta),
                                      cfg.n_antennas);
      beams.emplace_back(static_cast<std::uint16_t>(beam), theta);
    }
    std::sort(beams.begin(), beams.end());
    for (const auto& [beam, theta] : beams) {
      rec.true_beams.push_back(beam);
      rec.los_thetas.push_back(theta);
    }
    rec.snr_db = static_cast<float>(snr_db);
    ds.records[i] = std::move(rec);
  });
  return ds;
}

std::pair<Dataset, Dataset> split_train_val(const Dataset& ds,
                                            std::uint64_t seed) {
  const std::size_t count = ds.records.size();
  if (count < 10) {
    throw std::invalid_argument("split_train_val: need at least 10 records, "
                                "got " + std::to_string(count));
  }
  const auto n_train =
      static_cast<std::size_t>(std::llround(0.9 * static_cast<double>(count)));

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  RngStream rng = derive_stream(seed, kStreamSplit);
  for (std::size_t i = count - 1; i > 0; --i) {
    const std::size_t j = rng.bounded(i + 1);
    std::swap(order[i], order[j]);
  }

  std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> val_idx(order.begin() + n_train, order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());

  auto subset = [&ds](const std::vector<std::size_t>& idx) {
    Dataset out;
    out.n_antennas = ds.n_antennas;
    out.n_rf = ds.n_rf;
    out.n_slots = ds.n_slots;
    out.n_users = ds.n_users;
    out.n_paths = ds.n_paths;
    out.records.reserve(idx.size());
    for (std::size_t i : idx) out.records.push_back(ds.records[i]);
    return out;
  };
  return {subset(train_idx), subset(val_idx)};
}

std::vector<double> encode_input(const ComplexVec& r) {
  const std::size_t m = r.size();
  std::vector<double> x(2 * m);
  for (std::size_t t = 0; t < m; ++t) {
    x[t] = r[t].imag();
    x[m + t] = r[t].real();
  }
  return x;
}

std::vector<double> encode_record(const MeasurementRecord& rec) {
  const std::size_t m = rec.r.size();
  std::vector<double> x(2 * m);
  for (std::size_t t = 0; t < m; ++t) {
    x[t] = static_cast<double>(rec.r[t].imag());
    x[m + t] = static_cast<double>(rec.r[t].real());
  }
  return x;
}

void record_labels(const MeasurementRecord& rec, int n_antennas, double* out) {
  std::fill(out, out + n_antennas, 0.0);
  for (std::uint16_t beam : rec.true_beams) {
    if (beam < 1 || beam > n_antennas) {
      throw std::runtime_error("record_labels: beam index " +
                               std::to_string(beam) + " out of range");
    }
    out[beam - 1] = 1.0;
  }
}

void next_minibatch(const Dataset& train, RngStream& rng, int batch,
                    std::vector<double>& inputs, std::vector<double>& labels) {
  const std::size_t n = train.records.size();
  if (batch < 1 || static_cast<std::size_t>(batch) > n) {
    throw std::invalid_argument("next_minibatch: batch size " +
                                std::to_string(batch) +
                                " exceeds training set size " +
                                std::to_string(n));
  }
  // Floyd's algorithm: a uniform size-`batch` subset without replacement.
  std::vector<std::size_t> chosen;
  chosen.reserve(static_cast<std::size_t>(batch));
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t j = n - static_cast<std::size_t>(batch); j < n; ++j) {
    const std::size_t t = rng.bounded(j + 1);
    if (!seen[t]) {
      seen[t] = 1;
      chosen.push_back(t);
    } else {
      seen[j] = 1;
      chosen.push_back(j);
    }
  }

  const int input_len = 2 * train.measured_beams();
  const int n_antennas = train.n_antennas;
  inputs.resize(static_cast<std::size_t>(batch) * input_len);
  labels.resize(static_cast<std::size_t>(batch) * n_antennas);
  for (int row = 0; row < batch; ++row) {
    const MeasurementRecord& rec = train.records[chosen[row]];
    const std::vector<double> x = encode_record(rec);
    std::copy(x.begin(), x.end(),
              inputs.begin() + static_cast<std::size_t>(row) * input_len);
    record_labels(rec, n_antennas,
                  labels.data() + static_cast<std::size_t>(row) * n_antennas);
  }
}

void write_dataset(const Dataset& ds, const std::string& path) {
  BinaryWriter out(path);
  out.u32(kDatasetMagic);
  out.u16(kDatasetVersion);
  out.u16(ds.n_antennas);
  out.u16(ds.n_rf);
  out.u16(ds.n_slots);
  out.u16(ds.n_users);
  out.u16(ds.n_paths);
  out.u64(ds.records.size());
  const std::size_t m = static_cast<std::size_t>(ds.measured_beams());
  for (const MeasurementRecord& rec : ds.records) {
    if (rec.r.size() != m || rec.true_beams.size() != ds.n_users ||
        rec.los_thetas.size() != ds.n_users) {
      throw std::runtime_error("write_dataset: record shape does not match "
                               "header");
    }
    for (const std::complex<float>& v : rec.r) {
      out.f32(v.real());
      out.f32(v.imag());
    }
    for (std::uint16_t beam : rec.true_beams) out.u16(beam);
    for (float theta : rec.los_thetas) out.f32(theta);
    out.f32(rec.snr_db);
  }
  out.close();
}

Dataset read_dataset(const std::string& path) {
  BinaryReader in(path);
  const std::uint32_t magic = in.u32();
  if (magic != kDatasetMagic) {
    throw std::runtime_error("'" + path + "': bad dataset magic at offset 0");
  }
  const std::uint16_t version = in.u16();
  if (version != kDatasetVersion) {
    throw std::runtime_error("'" + path + "': unsupported dataset version " +
                             std::to_string(version) + " at offset 4");
  }
  Dataset ds;
  ds.n_antennas = in.u16();
  ds.n_rf = in.u16();
  ds.n_slots = in.u16();
  ds.n_users = in.u16();
  ds.n_paths = in.u16();
  const std::uint64_t count = in.u64();
  if (ds.n_rf == 0 || ds.n_slots == 0 || ds.n_users == 0 ||
      ds.measured_beams() > int{ds.n_antennas}) {
    throw std::runtime_error("'" + path + "': corrupt dataset header");
  }
  const std::size_t m = static_cast<std::size_t>(ds.measured_beams());
  ds.records.resize(count);
  for (MeasurementRecord& rec : ds.records) {
    rec.r.resize(m);
    for (std::complex<float>& v : rec.r) {
      const float re = in.f32();
      const float im = in.f32();
      v = {re, im};
    }
    rec.true_beams.resize(ds.n_users);
    for (std::uint16_t& beam : rec.true_beams) {
      beam = in.u16();
      if (beam < 1 || beam > ds.n_antennas) {
        throw std::runtime_error("'" + path + "': beam index out of range at "
                                 "offset " + std::to_string(in.offset() - 2));
      }
    }
    rec.los_thetas.resize(ds.n_users);
    for (float& theta : rec.los_thetas) theta = in.f32();
    rec.snr_db = in.f32();
  }
  if (!in.at_eof()) {
    throw std::runtime_error("'" + path + "': trailing bytes at offset " +
                             std::to_string(in.offset()));
  }
  return ds;
}

}  // namespace beamforge
