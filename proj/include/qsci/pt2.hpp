#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/integrals.hpp"

namespace qsci {

/// Determinant outside D connected to it, with <l|H|Psi> summed over every
/// parent and the diagonal <l|H|l>.
struct ExternalDeterminant {
  Determinant det;
  double coupling = 0.0;
  double diagonal = 0.0;
};

/// All externals of (dets, vector), sorted by determinant. Parents are
/// processed in fixed-size blocks and merged in block order, so the sums do
/// not depend on the worker count.
std::vector<ExternalDeterminant> external_space(std::span<const Determinant> dets,
                                                std::span<const double> vector, const IntegralStore& store);

inline constexpr double kIntruderThreshold = 1e-8;

struct Pt2Result {
  double correction = 0.0;
  std::size_t n_external = 0;
  std::size_t n_intruders = 0;
};

/// Epstein-Nesbet second-order energy of the eigenpair (energy, vector) over
/// dets. Terms with H_ll - E below the intruder threshold are skipped and
/// counted.
Pt2Result epstein_nesbet_pt2(std::span<const Determinant> dets, std::span<const double> vector, double energy,
                             const IntegralStore& store);

/// PT2 evaluated on the variational state at the end of an outer iteration.
struct Pt2Snapshot {
  std::uint64_t outer = 0;
  std::size_t n_dets = 0;
  double energy = 0.0;
  double correction = 0.0;
  std::size_t n_intruders = 0;
  friend bool operator==(const Pt2Snapshot&, const Pt2Snapshot&) = default;
};

struct ExtrapolationResult {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of E against eps_pt2 over (eps_pt2, E) points.
/// SingularFitError when fewer than two points or all eps_pt2 coincide.
ExtrapolationResult extrapolate_pt2(std::span<const std::pair<double, double>> points);

}  // namespace qsci
