#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/eigensolver.hpp"
#include "qsci/evolution.hpp"
#include "qsci/integrals.hpp"
#include "qsci/slater_condon.hpp"

namespace qsci {

/// Mean measured occupation of each spin orbital, over all raw shots.
struct OccupancyDistribution {
  std::vector<double> alpha;
  std::vector<double> beta;

  const std::vector<double>& channel(Spin s) const noexcept { return s == Spin::alpha ? alpha : beta; }
};

/// Throws InputError on an empty set and FormatError on a malformed shot.
OccupancyDistribution occupancy_distribution(const MeasurementSet& set, int n_orb);

/// Distinct in-sector determinants of the set, most frequent first (ties by
/// determinant order). Out-of-sector shots are dropped.
std::vector<Determinant> harvest_valid(const MeasurementSet& set, int n_orb, Sector sector);

/// Concatenates the shots of several sets (time of the first set).
MeasurementSet pool_measurements(std::span<const MeasurementSet> sets);

enum class ExcitationKind : std::uint8_t { single, same_spin_double, opposite_spin_double };

struct Candidate {
  Determinant det;
  double probability = 0.0;  ///< product of the normalized hole and particle weights drawn
  ExcitationKind kind = ExcitationKind::single;
};

/// One single and one same-spin double per spin channel plus one
/// alpha-beta double, drawn with holes weighted by the measured occupation of
/// the parent's occupied orbitals and particles weighted by the measured
/// vacancy of its virtual orbitals (each renormalized over its restricted set,
/// uniform when the restricted weights all vanish). Channels lacking the
/// needed holes or particles are skipped.
std::vector<Candidate> propose_candidates(const Determinant& parent, const OccupancyDistribution& occ,
                                          Rng& rng);

struct ScoredCandidate {
  Determinant det;
  double score = 0.0;  ///< P(candidate) * |<parent|H|candidate>|
};

/// Top `keep` distinct candidates by score, descending; ties by determinant.
std::vector<ScoredCandidate> screen_candidates(std::span<const Candidate> candidates,
                                               const Determinant& parent, const IntegralStore& store,
                                               std::size_t keep);

struct SamplerConfig {
  std::size_t max_dets = 50000;
  int rounds = 10;
  int samples = 100;
  double eps_screen = 1e-2;
  double eps_wf = 1e-5;
  double conv_tol = 1e-6;
  std::uint64_t seed = 0;
  bool pool_steps = false;  ///< collate every time step into one set
  DavidsonOptions solver;

  void validate() const;
};

/// One sampling round. Energies before (`energy`) and after (`energy_filtered`)
/// the wavefunction-threshold filter are kept apart: only the first is
/// guaranteed non-increasing.
struct TraceRecord {
  std::uint64_t outer = 0;
  int round = 0;
  std::size_t n_dets = 0;
  double energy = 0.0;
  double delta = 0.0;
  std::size_t n_dets_filtered = 0;
  double energy_filtered = 0.0;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SubspaceState {
  std::vector<Determinant> dets;  ///< dets[0] is the reference and is never filtered
  SparseInteractionMatrix matrix;
  double energy = 0.0;
  std::vector<double> vector;
  std::vector<TraceRecord> trace;

  // Loop position: the next round to run is (counter, next_round).
  std::uint64_t counter = 0;
  int next_round = 0;
  double delta = 1.0;  ///< lowering achieved by the most recent round
  bool needs_solve = false;

  std::unordered_map<Determinant, std::size_t> index;  ///< position of each det in `dets`

  bool contains(const Determinant& d) const { return index.contains(d); }
  void reindex();
};

SubspaceState initial_state(const Determinant& reference, const IntegralStore& store);

/// Appends up to `cap - |D|` new determinants with zero amplitude; marks the
/// state for a solve. Returns how many were added.
std::size_t insert_determinants(SubspaceState& state, std::span<const Determinant> dets,
                                const IntegralStore& store, std::size_t cap);

/// Rebuilds matrix and index from dets (used after loading a checkpoint).
void rebuild(SubspaceState& state, const IntegralStore& store);

/// One sampling round at the state's loop position.
void expand_round(SubspaceState& state, const OccupancyDistribution& occ, const SamplerConfig& config,
                  const IntegralStore& store);

struct QsciHooks {
  /// Called after every round with the loop position already advanced.
  std::function<void(const SubspaceState&)> after_round;
};

/// Runs the sampling loop over the measurement sets (cycled) until |D|
/// reaches max_dets or the last round lowered E by no more than conv_tol,
/// both checked between outer iterations only (a resumed state finishes its
/// current outer iteration first).
SubspaceState run_qsci(std::span<const MeasurementSet> sets, const SamplerConfig& config,
                       const IntegralStore& store, Sector sector, const QsciHooks& hooks = {},
                       std::optional<SubspaceState> resume = std::nullopt);

}  // namespace qsci
