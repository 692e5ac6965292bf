#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsci/error.hpp"
#include "qsci/slater_condon.hpp"

namespace qsci {

struct EigenResult {
  double energy = 0.0;
  std::vector<double> vector;  ///< unit norm; largest-magnitude entry positive
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> ritz_history;  ///< lowest Ritz value after each iteration
};

struct DavidsonOptions {
  double tolerance = 1e-9;  ///< on ||Hv - Ev||_2
  int max_iterations = 1000;
  std::size_t max_subspace = 20;
  std::size_t dense_threshold = 64;  ///< K at or below this is solved densely
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, EigenResult best)
      : Error(what), best_(std::move(best)) {}
  const EigenResult& best() const noexcept { return best_; }

 private:
  EigenResult best_;
};

/// Algebraically lowest eigenpair. `guess` may be empty or zero-padded; when
/// given it seeds the search space together with the unit vector on the
/// smallest diagonal entry.
EigenResult davidson_lowest(const SparseInteractionMatrix& matrix, std::span<const double> guess = {},
                            const DavidsonOptions& options = {});

/// Lowest eigenpair of a dense symmetric row-major n x n matrix.
EigenResult dense_lowest(std::span<const double> matrix, std::size_t n);

}  // namespace qsci
