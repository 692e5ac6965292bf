#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/integrals.hpp"

namespace qsci {

/// <d1|H|d2> in Hartree by the Slater-Condon rules (zero beyond doubles).
double matrix_element(const Determinant& d1, const Determinant& d2, const IntegralStore& store);

/// Same, reusing an excitation already computed for (d1, d2).
double matrix_element(const Determinant& d1, const ExcitationInfo& info, const IntegralStore& store);

/// <d|H|d>.
double diagonal_element(const Determinant& d, const IntegralStore& store);

struct MatrixEntry {
  std::uint32_t col = 0;
  double value = 0.0;
  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Symmetric sparse H_kl over an ordered determinant list. Rows hold both
/// triangles (sorted by column, diagonal included) and every off-diagonal
/// value is computed once as <D[min]|H|D[max]>, so the storage is exactly
/// symmetric and independent of how the matrix was assembled.
class SparseInteractionMatrix {
 public:
  SparseInteractionMatrix() = default;

  std::size_t dimension() const noexcept { return rows_.size(); }
  std::span<const MatrixEntry> row(std::size_t k) const { return rows_[k]; }
  double diagonal(std::size_t k) const noexcept { return diag_[k]; }
  std::span<const double> diagonal() const noexcept { return diag_; }
  std::size_t nonzeros() const noexcept;

  /// H_kl, zero when absent.
  double at(std::size_t k, std::size_t l) const;

  /// y = H x.
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Row-major dense copy (tests and small solves).
  std::vector<double> dense() const;

  /// Sparse copy of a dense symmetric row-major n x n matrix (zeros off the
  /// diagonal dropped). Throws InputError if it is not exactly symmetric.
  static SparseInteractionMatrix from_dense(std::span<const double> a, std::size_t n);

  /// Submatrix on the given ascending row indices.
  SparseInteractionMatrix restricted(std::span<const std::size_t> keep) const;

  friend bool operator==(const SparseInteractionMatrix&, const SparseInteractionMatrix&) = default;

 private:
  friend SparseInteractionMatrix build_interaction_matrix(std::span<const Determinant>,
                                                          const IntegralStore&);
  friend SparseInteractionMatrix extend_interaction_matrix(const SparseInteractionMatrix&,
                                                           std::span<const Determinant>,
                                                           std::span<const Determinant>,
                                                           const IntegralStore&);
  std::vector<std::vector<MatrixEntry>> rows_;
  std::vector<double> diag_;
};

/// Below this size connected pairs are found by all-pairs XOR screening;
/// above it by hashing the excitations of each row.
inline constexpr std::size_t kAllPairsThreshold = 2000;

/// Throws DimensionError on an empty list and InputError on duplicates.
SparseInteractionMatrix build_interaction_matrix(std::span<const Determinant> dets,
                                                 const IntegralStore& store);

/// Appends `added` to a matrix built over `existing`. Equal to rebuilding on
/// the concatenation. Throws InputError if the sets overlap.
SparseInteractionMatrix extend_interaction_matrix(const SparseInteractionMatrix& old,
                                                  std::span<const Determinant> existing,
                                                  std::span<const Determinant> added,
                                                  const IntegralStore& store);

}  // namespace qsci
