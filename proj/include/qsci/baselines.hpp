#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/integrals.hpp"
#include "qsci/sampler.hpp"

namespace qsci {

struct BaselineResult {
  std::string method;
  std::vector<Determinant> dets;
  double energy = 0.0;
  std::vector<double> vector;
  std::vector<TraceRecord> trace;
  std::size_t intruders = 0;  ///< CIPSI candidates with a vanishing denominator
};

inline constexpr std::uint64_t kFciDimensionCap = 1'000'000;

/// Exact ground state of the whole sector. CapabilityError above the cap.
BaselineResult fci_solve(const IntegralStore& store, Sector sector);

/// Heat-bath CI from the HF determinant: every connected determinant with
/// |H_kl v_k| > delta for some k in D is added, until no additions or the
/// energy moves by at most conv_tol.
BaselineResult hci_run(const IntegralStore& store, Sector sector, double delta, double conv_tol = 1e-8,
                       std::size_t max_dim = std::numeric_limits<std::size_t>::max());

/// CIPSI-style selection: external determinants ranked by
/// |<l|H|Psi>| / (H_ll - E) (intruders rank first), n_select added per
/// iteration until max_dim or no candidates remain.
BaselineResult cipsi_run(const IntegralStore& store, Sector sector, std::size_t n_select,
                         std::size_t max_dim = std::numeric_limits<std::size_t>::max());

/// |D| of the first trace row within `window` of the reference energy.
std::optional<std::size_t> dets_to_accuracy(std::span<const TraceRecord> trace, double reference,
                                            double window = 1e-3);

}  // namespace qsci
