#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsci/evolution.hpp"
#include "qsci/pt2.hpp"
#include "qsci/sampler.hpp"

namespace qsci {

// Measurement files: a header line `# time=<float> shots=<int> nqubits=<int>`
// followed by one 0/1 string per shot, alpha block then beta block.

void write_measurement_set(std::ostream& out, const MeasurementSet& set);
MeasurementSet parse_measurement_set(std::istream& in);
MeasurementSet read_measurement_set(const std::filesystem::path& path);

/// Writes dir/step_1.txt ... dir/step_K.txt.
void write_measurements(const std::filesystem::path& dir, std::span<const MeasurementSet> sets);

/// A single measurement file, or every step_<k>.txt of a directory in k order.
std::vector<MeasurementSet> read_measurements(const std::filesystem::path& path);

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Everything needed to continue an interrupted sampling run. The
/// interaction matrix is not stored; it is rebuilt from the determinants.
struct Checkpoint {
  std::uint64_t seed = 0;
  SubspaceState state;
  std::vector<Pt2Snapshot> snapshots;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);

/// FormatError on a bad magic, newer version or truncated payload.
Checkpoint read_checkpoint(const std::filesystem::path& path, const IntegralStore& store);

/// method,outer,round,n_dets,energy,delta,n_dets_filtered,energy_filtered
void write_trace_csv(std::ostream& out, const std::string& method, std::span<const TraceRecord> trace,
                     bool header = true);

/// outer,n_dets,energy,eps_pt2,energy_pt2,n_intruders
void write_snapshots_csv(std::ostream& out, std::span<const Pt2Snapshot> snapshots);

/// (eps_pt2, energy) columns of a CSV with a header naming them.
std::vector<std::pair<double, double>> read_pt2_points(std::istream& in);

/// Determinant bitstring and amplitude per line.
void write_wavefunction(std::ostream& out, std::span<const Determinant> dets, std::span<const double> vector);
std::pair<std::vector<Determinant>, std::vector<double>> read_wavefunction(std::istream& in, int n_orb);

/// Fixed-precision rendering shared by CSV and JSON outputs.
std::string format_energy(double e);

}  // namespace qsci
