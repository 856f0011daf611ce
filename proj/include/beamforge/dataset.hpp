#ifndef BEAMFORGE_DATASET_HPP
#define BEAMFORGE_DATASET_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "beamforge/core_math.hpp"
#include "beamforge/rng.hpp"
#include "beamforge/scenario.hpp"

namespace beamforge {

// One training example: the stacked measurement and its ground truth.
// Values are held at file precision (32-bit floats) so that write/read cycles
// are bit-exact; computation upcasts to 64-bit.
struct MeasurementRecord {
  std::vector<std::complex<float>> r;   // length M, slot order
  std::vector<std::uint16_t> true_beams;  // U, ascending
  std::vector<float> los_thetas;        // U, matching true_beams order
  float snr_db = 0.0f;
};

struct Dataset {
  std::uint16_t n_antennas = 0;
  std::uint16_t n_rf = 0;
  std::uint16_t n_slots = 0;
  std::uint16_t n_users = 0;
  std::uint16_t n_paths = 0;
  std::vector<MeasurementRecord> records;

  int measured_beams() const { return int{n_slots} * int{n_rf}; }

  // Throws when the header does not match the scenario.
  void check_matches(const ScenarioConfig& cfg) const;
};

// Four-step generation per record index i under derive_stream(master_seed, i):
// sample a channel, derive the LOS beam indices, draw snr_db uniform in
// [snr_lo_db, snr_hi_db], synthesize r through the measurement matrix.
Dataset generate_dataset(const ScenarioConfig& cfg, std::int64_t count,
                         double snr_lo_db, double snr_hi_db,
                         std::uint64_t master_seed, int threads = 1);

// Uniformly random disjoint partition with |train| = round(0.9 * count).
// Requires count >= 10.
std::pair<Dataset, Dataset> split_train_val(const Dataset& ds,
                                            std::uint64_t seed);

// [Im(r); Re(r)] — imaginary block first, each in measurement order.
std::vector<double> encode_input(const ComplexVec& r);
std::vector<double> encode_record(const MeasurementRecord& rec);

// Materializes the binary label row for one record (1-based beam indices).
void record_labels(const MeasurementRecord& rec, int n_antennas, double* out);

// Samples `batch` records uniformly without replacement; fills row-major
// inputs [batch x 2M] and labels [batch x N_A].
void next_minibatch(const Dataset& train, RngStream& rng, int batch,
                    std::vector<double>& inputs, std::vector<double>& labels);

// "AMPB" dataset file, little-endian:
//   u32 magic 0x414D5042, u16 version = 1,
//   u16 N_A, u16 N_R, u16 J, u16 U, u16 L, u64 count,
//   per record: M x (f32 re, f32 im), U x u16 beams (ascending),
//   U x f32 thetas, f32 snr_db.
inline constexpr std::uint32_t kDatasetMagic = 0x414D5042;
inline constexpr std::uint16_t kDatasetVersion = 1;

void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

}  // namespace beamforge

#endif
