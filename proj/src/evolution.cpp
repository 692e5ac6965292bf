#include "qsci/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "qsci/error.hpp"
#include "qsci/parallel.hpp"

namespace qsci {

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxSimulatorQubits)
    throw CapabilityError("statevector of " + std::to_string(n_qubits) + " qubits exceeds the " +
                          std::to_string(kMaxSimulatorQubits) + "-qubit simulator cap");
  amps_.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
  amps_[0] = 1.0;
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

Statevector prepare_reference(const Determinant& d) {
  Statevector psi(2 * d.n_orb);
  const std::size_t index = static_cast<std::size_t>(d.alpha | (d.beta << d.n_orb));
  psi[0] = 0.0;
  psi[index] = 1.0;
  return psi;
}

namespace {

// P|b> = phase(b) |b ^ x> with phase = i^{|x&z|} (-1)^{|z&b|}.
std::complex<double> pauli_phase(const PauliString& p, std::size_t b) {
  static constexpr std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int ny = std::popcount(p.x & p.z) & 3;
  const int sign = std::popcount(p.z & static_cast<Mask>(b)) & 1;
  return sign ? -ipow[ny] : ipow[ny];
}

}  // namespace

void apply_pauli_rotation(Statevector& psi, const PauliString& p, double theta) {
  if (p.n_qubits != psi.n_qubits()) throw DimensionError("Pauli word and statevector sizes differ");
  const double c = std::cos(theta);
  const std::complex<double> mis{0.0, -std::sin(theta)};
  const std::size_t dim = psi.size();
  const auto x = static_cast<std::size_t>(p.x);
  if (x == 0) {
    for (std::size_t b = 0; b < dim; ++b) psi[b] *= c + mis * pauli_phase(p, b);
    return;
  }
  for (std::size_t b = 0; b < dim; ++b) {
    const std::size_t b2 = b ^ x;
    if (b2 < b) continue;
    const auto a1 = psi[b];
    const auto a2 = psi[b2];
    psi[b] = c * a1 + mis * pauli_phase(p, b2) * a2;
    psi[b2] = c * a2 + mis * pauli_phase(p, b) * a1;
  }
}

Statevector apply_pauli_sum(const PauliSum& h, const Statevector& psi) {
  if (h.n_qubits() != psi.n_qubits()) throw DimensionError("Pauli sum and statevector sizes differ");
  Statevector out(psi.n_qubits());
  out[0] = 0.0;
  for (const auto& t : h.terms()) {
    const auto x = static_cast<std::size_t>(t.string.x);
    for (std::size_t b = 0; b < psi.size(); ++b)
      out[b ^ x] += t.coefficient * pauli_phase(t.string, b) * psi[b];
  }
  return out;
}

double expectation(const PauliSum& h, const Statevector& psi) {
  const auto hpsi = apply_pauli_sum(h, psi);
  std::complex<double> s = 0.0;
  for (std::size_t b = 0; b < psi.size(); ++b) s += std::conj(psi[b]) * hpsi[b];
  return s.real();
}

std::size_t qdrift_sample_count(double lambda, double time, double epsilon) {
  if (!(epsilon > 0)) throw ParameterError("qDRIFT precision must be positive");
  return static_cast<std::size_t>(std::ceil(2.0 * lambda * lambda * time * time / epsilon));
}

QDriftCircuit sample_qdrift(const PauliSum& h, double time, const QDriftDepth& depth,
                            std::uint64_t seed) {
  if (depth.epsilon.has_value() == depth.samples.has_value())
    throw ParameterError("give exactly one of qDRIFT precision or sample count");
  QDriftCircuit circuit;
  circuit.time = time;
  circuit.seed = seed;
  const double lambda = l1_norm(h);
  if (depth.epsilon && !(*depth.epsilon > 0)) throw ParameterError("qDRIFT precision must be positive");
  if (lambda == 0.0) return circuit;
  const std::size_t n = depth.samples ? *depth.samples : qdrift_sample_count(lambda, time, *depth.epsilon);
  circuit.n_samples = n;

  std::vector<std::size_t> index;
  std::vector<double> cumulative;
  double run = 0.0;
  for (std::size_t j = 0; j < h.terms().size(); ++j) {
    const auto& t = h.terms()[j];
    if (t.string.is_identity()) continue;
    run += std::abs(t.coefficient);
    index.push_back(j);
    cumulative.push_back(run);
  }
  Rng rng(seed);
  circuit.rotations.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform() * run;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const std::size_t j = index[static_cast<std::size_t>(it - cumulative.begin())];
    const double sgn = h.terms()[j].coefficient > 0 ? 1.0 : -1.0;
    circuit.rotations.push_back({j, lambda * time * sgn / static_cast<double>(n)});
  }
  return circuit;
}

void run_circuit(Statevector& psi, const PauliSum& h, const QDriftCircuit& circuit) {
  for (const auto& r : circuit.rotations) apply_pauli_rotation(psi, h.terms()[r.term].string, r.angle);
}

std::vector<std::string> sample_shots(const Statevector& psi, std::size_t shots, double depolarizing,
                                      Rng& rng) {
  if (depolarizing < 0.0 || depolarizing > 1.0) throw ParameterError("depolarizing probability outside [0, 1]");
  const int nq = psi.n_qubits();
  std::vector<double> cumulative(psi.size());
  double run = 0.0;
  for (std::size_t b = 0; b < psi.size(); ++b) {
    run += std::norm(psi[b]);
    cumulative[b] = run;
  }
  auto encode = [nq](std::size_t b) {
    std::string s(static_cast<std::size_t>(nq), '0');
    for (int q = 0; q < nq; ++q)
      if ((b >> q) & 1U) s[static_cast<std::size_t>(q)] = '1';
    return s;
  };
  std::vector<std::string> out;
  out.reserve(shots);
  for (std::size_t k = 0; k < shots; ++k) {
    if (depolarizing > 0.0 && rng.uniform() < depolarizing) {
      std::string s(static_cast<std::size_t>(nq), '0');
      for (int q = 0; q < nq; ++q)
        if (rng.bits() >> 63) s[static_cast<std::size_t>(q)] = '1';
      out.push_back(std::move(s));
      continue;
    }
    const double u = rng.uniform() * run;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    out.push_back(encode(static_cast<std::size_t>(it - cumulative.begin())));
  }
  return out;
}

void EvolutionConfig::validate() const {
  if (!(tau > 0)) throw ParameterError("time step tau must be positive");
  if (steps < 1) throw ParameterError("time steps must be >= 1");
  if (instances < 1) throw ParameterError("qDRIFT instances must be >= 1");
  if (shots < 1) throw ParameterError("shots must be >= 1");
  if (depolarizing < 0.0 || depolarizing > 1.0) throw ParameterError("depolarizing probability outside [0, 1]");
  if (depth.epsilon.has_value() == depth.samples.has_value())
    throw ParameterError("give exactly one of qDRIFT precision or sample count");
  if (depth.epsilon && !(*depth.epsilon > 0)) throw ParameterError("qDRIFT precision must be positive");
}

Statevector evolve_instance(const PauliSum& h, const Determinant& reference, double time,
                            const QDriftDepth& depth, std::uint64_t seed, int step, int instance) {
  auto psi = prepare_reference(reference);
  const auto circuit = sample_qdrift(
      h, time, depth,
      derive_seed(seed, Stream::evolution_circuit,
                  {static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(instance)}));
  run_circuit(psi, h, circuit);
  return psi;
}

std::vector<MeasurementSet> evolve_and_measure(const PauliSum& h, const Determinant& reference,
                                               const EvolutionConfig& config) {
  config.validate();
  if (2 * reference.n_orb > kMaxSimulatorQubits)
    throw CapabilityError(std::to_string(2 * reference.n_orb) + " qubits exceed the simulator cap");
  if (h.n_qubits() != 2 * reference.n_orb) throw DimensionError("Hamiltonian and reference sizes differ");
  std::vector<MeasurementSet> sets;
  for (int step = 1; step <= config.steps; ++step) {
    const double time = step * config.tau;
    std::vector<std::vector<std::string>> per_instance(static_cast<std::size_t>(config.instances));
    parallel_for(per_instance.size(), [&](std::size_t i) {
      const int inst = static_cast<int>(i);
      const auto psi = evolve_instance(h, reference, time, config.depth, config.seed, step, inst);
      Rng rng(derive_seed(config.seed, Stream::evolution_shots,
                          {static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(inst)}));
      per_instance[i] = sample_shots(psi, config.shots, config.depolarizing, rng);
    });
    MeasurementSet set{time, 2 * reference.n_orb, {}};
    set.shots.reserve(config.shots * per_instance.size());
    for (auto& shots : per_instance)
      for (auto& s : shots) set.shots.push_back(std::move(s));
    sets.push_back(std::move(set));
  }
  return sets;
}

}  // namespace qsci
