#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsci/baselines.hpp"
#include "qsci/evolution.hpp"
#include "qsci/pt2.hpp"
#include "qsci/sampler.hpp"

namespace qsci {

struct BaselineToggles {
  bool fci = true;  ///< skipped (and noted) when the sector exceeds the FCI cap
  bool hci = false;
  double hci_delta = 1e-4;
  bool cipsi = false;
  std::size_t cipsi_select = 10;
  std::size_t max_dets = 50000;  ///< cap for HCI and CIPSI
};

struct RunConfig {
  std::filesystem::path fcidump;
  std::optional<Sector> sector;  ///< defaults to the FCIDUMP's NELEC/MS2
  EvolutionConfig evolution;
  SamplerConfig sampler;
  std::uint64_t seed = 0;  ///< master seed for every stage
  std::optional<std::filesystem::path> measurements;  ///< use these instead of simulating
  bool pt2 = true;
  BaselineToggles baselines;
  std::filesystem::path output_dir = "qsci_out";
  std::optional<std::filesystem::path> checkpoint;  ///< rewritten after every round
  std::optional<std::filesystem::path> resume;

  void validate() const;
};

struct RunSummary {
  std::string tag;
  double e_hf = 0.0;
  double e_qsci = 0.0;
  std::size_t n_dets = 0;
  std::optional<Pt2Result> pt2;
  std::vector<Pt2Snapshot> snapshots;
  std::optional<ExtrapolationResult> extrapolation;
  std::optional<double> e_fci, e_hci, e_cipsi;
  SubspaceState state;
};

/// Full protocol: simulate (or load) measurements, run the sampler, PT2 and
/// the requested baselines, and write every artifact under output_dir. On
/// failure a MANIFEST marks the directory incomplete, error.json records the
/// error, and the exception propagates. A missing FCIDUMP fails before
/// anything is written.
RunSummary run_pipeline(const RunConfig& config);

/// Runs the pipeline for every FCIDUMP in `points` (output in
/// output_dir/point_<k>_<stem>) and writes output_dir/curve.csv. Failed
/// points leave an empty row.
std::vector<std::optional<RunSummary>> pec_scan(const RunConfig& base,
                                                const std::vector<std::filesystem::path>& points);

}  // namespace qsci
