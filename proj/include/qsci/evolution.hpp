#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/qubit_hamiltonian.hpp"
#include "qsci/rng.hpp"

namespace qsci {

/// Dense simulation is capped at 24 qubits (16M amplitudes).
inline constexpr int kMaxSimulatorQubits = 24;

/// Amplitudes over 2^n computational basis states; bit q of the index is the
/// occupation of qubit q.
class Statevector {
 public:
  explicit Statevector(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t size() const noexcept { return amps_.size(); }
  std::complex<double>& operator[](std::size_t i) { return amps_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return amps_[i]; }
  const std::vector<std::complex<double>>& amplitudes() const noexcept { return amps_; }
  double norm() const;

 private:
  int n_qubits_;
  std::vector<std::complex<double>> amps_;
};

/// Basis state of a determinant (an X gate on every occupied spin orbital).
Statevector prepare_reference(const Determinant& d);

/// psi <- exp(-i theta P) psi = cos(theta) psi - i sin(theta) P psi.
void apply_pauli_rotation(Statevector& psi, const PauliString& p, double theta);

/// H|psi> for a Pauli sum; <psi|H|psi>.
Statevector apply_pauli_sum(const PauliSum& h, const Statevector& psi);
double expectation(const PauliSum& h, const Statevector& psi);

struct QDriftRotation {
  std::size_t term = 0;  ///< index into PauliSum::terms()
  double angle = 0.0;    ///< lambda t sgn(h_j) / N
};

struct QDriftCircuit {
  std::vector<QDriftRotation> rotations;
  std::size_t n_samples = 0;
  double time = 0.0;
  std::uint64_t seed = 0;
};

/// Either a target channel precision epsilon (N = ceil(2 lambda^2 t^2 / eps))
/// or an explicit sample count.
struct QDriftDepth {
  std::optional<double> epsilon;
  std::optional<std::size_t> samples;

  static QDriftDepth from_epsilon(double e) { return {e, std::nullopt}; }
  static QDriftDepth from_samples(std::size_t n) { return {std::nullopt, n}; }
};

std::size_t qdrift_sample_count(double lambda, double time, double epsilon);

/// Draws N non-identity terms i.i.d. with p_j = |h_j| / lambda.
QDriftCircuit sample_qdrift(const PauliSum& h, double time, const QDriftDepth& depth,
                            std::uint64_t seed);

/// Applies the rotations in order.
void run_circuit(Statevector& psi, const PauliSum& h, const QDriftCircuit& circuit);

/// One measurement set: raw spin-blocked bitstrings of length n_qubits.
struct MeasurementSet {
  double time = 0.0;
  int n_qubits = 0;
  std::vector<std::string> shots;
};

/// Samples basis states from |psi|^2; with probability `depolarizing` a shot
/// is replaced by a uniformly random bitstring.
std::vector<std::string> sample_shots(const Statevector& psi, std::size_t shots, double depolarizing,
                                      Rng& rng);

struct EvolutionConfig {
  double tau = 2.0 * 3.14159265358979323846 / 5.0;
  int steps = 5;
  int instances = 50;
  std::size_t shots = 1024;
  QDriftDepth depth = QDriftDepth::from_samples(200);
  double depolarizing = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// State after one qDRIFT instance at `time`; the circuit seed is derived
/// from (seed, step, instance).
Statevector evolve_instance(const PauliSum& h, const Determinant& reference, double time,
                            const QDriftDepth& depth, std::uint64_t seed, int step, int instance);

/// For k = 1..steps: `instances` fresh qDRIFT circuits at t = k tau, each
/// measured `shots` times, pooled in instance order.
std::vector<MeasurementSet> evolve_and_measure(const PauliSum& h, const Determinant& reference,
                                               const EvolutionConfig& config);

}  // namespace qsci
