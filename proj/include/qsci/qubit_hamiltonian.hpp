#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/integrals.hpp"

namespace qsci {

/// Pauli word on up to 64 qubits in symplectic form: qubit q carries
/// I (x=0,z=0), X (1,0), Z (0,1) or Y (1,1). Qubit q is character q of the
/// text form. Spin-orbital (alpha, i) is qubit i, (beta, i) is qubit M + i.
struct PauliString {
  Mask x = 0;
  Mask z = 0;
  int n_qubits = 0;

  bool is_identity() const noexcept { return x == 0 && z == 0; }
  std::string to_string() const;
  static PauliString parse(std::string_view word);

  friend auto operator<=>(const PauliString&, const PauliString&) = default;
};

struct PauliTerm {
  double coefficient = 0.0;  ///< Hartree
  PauliString string;
};

/// Real-weighted sum of distinct Pauli words, sorted by word.
class PauliSum {
 public:
  static constexpr double kPruneThreshold = 1e-12;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Merges equal words, drops |h| < kPruneThreshold and sorts.
  static PauliSum from_terms(int n_qubits, std::vector<PauliTerm> terms);

  /// Coefficient of the all-identity word (zero when absent).
  double identity_coefficient() const;

 private:
  int n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Second-quantized Hamiltonian mapped with Jordan-Wigner on spin-blocked
/// qubits. Throws CapabilityError when 2M > 64.
PauliSum jordan_wigner(const IntegralStore& store);

/// Sum of |h_j| over non-identity terms.
double l1_norm(const PauliSum& h);

/// One `coefficient word` pair per line.
void write_pauli_sum(std::ostream& out, const PauliSum& h);
PauliSum read_pauli_sum(std::istream& in);

}  // namespace qsci
