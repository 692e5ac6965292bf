#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "qsci/error.hpp"
#include "qsci/evolution.hpp"
#include "qsci/parallel.hpp"

using namespace qsci;

namespace {

std::string data(const char* name) { return std::string(QSCI_DATA_DIR) + "/" + name; }

Statevector random_state(int nq, std::uint64_t seed) {
  Rng rng(derive_seed(seed, Stream::test));
  Statevector psi(nq);
  double s = 0.0;
  for (std::size_t b = 0; b < psi.size(); ++b) {
    psi[b] = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    s += std::norm(psi[b]);
  }
  for (std::size_t b = 0; b < psi.size(); ++b) psi[b] /= std::sqrt(s);
  return psi;
}

Eigen::VectorXcd to_eigen(const Statevector& psi) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t b = 0; b < psi.size(); ++b) v(static_cast<Eigen::Index>(b)) = psi[b];
  return v;
}

double max_diff(const Statevector& psi, const Eigen::VectorXcd& v) {
  double d = 0.0;
  for (std::size_t b = 0; b < psi.size(); ++b) d = std::max(d, std::abs(psi[b] - v(static_cast<Eigen::Index>(b))));
  return d;
}

}  // namespace

TEST(Statevector, ReferenceIsBasisState) {
  const Determinant d{0b01, 0b10, 2};
  const auto psi = prepare_reference(d);
  ASSERT_EQ(psi.size(), 16u);
  for (std::size_t b = 0; b < 16; ++b) EXPECT_EQ(psi[b], b == oracle::basis_index(d) ? 1.0 : 0.0);
  EXPECT_THROW(Statevector(kMaxSimulatorQubits + 1), CapabilityError);
}

TEST(PauliRotation, MatchesDenseExponential) {
  const auto p = PauliString::parse("IIXIYI");
  const auto mat = oracle::pauli_matrix(PauliSum::from_terms(6, {{1.0, p}}));
  for (double theta : {0.3, -1.1, 2.5}) {
    auto psi = random_state(6, 1);
    const auto expected = oracle::evolve(mat, to_eigen(psi), theta);
    apply_pauli_rotation(psi, p, theta);
    EXPECT_LT(max_diff(psi, expected), 1e-12);
  }
}

TEST(PauliRotation, PreservesNormAndInverts) {
  const auto p = PauliString::parse("XYZZYX");
  auto psi = random_state(6, 2);
  const auto start = psi;
  apply_pauli_rotation(psi, p, 0.77);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
  apply_pauli_rotation(psi, p, -0.77);
  for (std::size_t b = 0; b < psi.size(); ++b) EXPECT_LT(std::abs(psi[b] - start[b]), 1e-12);
}

TEST(PauliRotation, DiagonalWordOnlyChangesPhase) {
  const Determinant d{0b01, 0b00, 2};
  auto psi = prepare_reference(d);
  apply_pauli_rotation(psi, PauliString::parse("ZIII"), 0.4);
  const auto idx = oracle::basis_index(d);
  EXPECT_LT(std::abs(psi[idx] - std::polar(1.0, 0.4)), 1e-14);  // Z eigenvalue -1
  for (std::size_t b = 0; b < psi.size(); ++b)
    if (b != idx) EXPECT_EQ(std::abs(psi[b]), 0.0);
}

TEST(PauliSumAction, MatchesDenseMatrix) {
  const auto h = jordan_wigner(read_fcidump(data("h2_sto3g.fcidump")));
  const auto psi = random_state(4, 3);
  const Eigen::VectorXcd expected = oracle::pauli_matrix(h) * to_eigen(psi);
  const auto hpsi = apply_pauli_sum(h, psi);
  EXPECT_LT(max_diff(hpsi, expected), 1e-12);
  EXPECT_NEAR(expectation(h, psi), to_eigen(psi).dot(expected).real(), 1e-12);
}

TEST(QDrift, SampleCount) {
  EXPECT_EQ(qdrift_sample_count(2.0, 1.0, 0.08), 100u);
  EXPECT_THROW(qdrift_sample_count(2.0, 1.0, 0.0), ParameterError);
  const auto h = PauliSum::from_terms(2, {{0.5, PauliString::parse("XZ")}, {-1.5, PauliString::parse("YY")}});
  EXPECT_EQ(sample_qdrift(h, 1.0, QDriftDepth::from_epsilon(0.08), 1).n_samples, 100u);
  EXPECT_EQ(sample_qdrift(h, 1.0, QDriftDepth::from_samples(17), 1).rotations.size(), 17u);
  EXPECT_THROW(sample_qdrift(h, 1.0, QDriftDepth{}, 1), ParameterError);
}

TEST(QDrift, AnglesCarrySignAndMagnitude) {
  const auto h = PauliSum::from_terms(2, {{0.5, PauliString::parse("XZ")}, {-1.5, PauliString::parse("YY")}});
  const auto c = sample_qdrift(h, 0.3, QDriftDepth::from_samples(40), 5);
  for (const auto& r : c.rotations) {
    const double sgn = h.terms()[r.term].coefficient > 0 ? 1.0 : -1.0;
    EXPECT_DOUBLE_EQ(r.angle, 2.0 * 0.3 * sgn / 40.0);
  }
}

TEST(QDrift, SingleTermIsExact) {
  const auto h = PauliSum::from_terms(4, {{-0.37, PauliString::parse("XYZI")}, {2.0, PauliString::parse("IIII")}});
  const auto nonid = PauliSum::from_terms(4, {{-0.37, PauliString::parse("XYZI")}});
  auto psi = random_state(4, 4);
  const auto expected = oracle::evolve(oracle::pauli_matrix(nonid), to_eigen(psi), 1.7);
  run_circuit(psi, h, sample_qdrift(h, 1.7, QDriftDepth::from_samples(13), 9));
  EXPECT_LT(max_diff(psi, expected), 1e-12);
}

TEST(QDrift, TermFrequenciesFollowWeights) {
  const auto h = jordan_wigner(read_fcidump(data("h2_sto3g.fcidump")));
  const std::size_t n = 200000;
  const auto c = sample_qdrift(h, 1.0, QDriftDepth::from_samples(n), 11);
  std::vector<double> counts(h.size(), 0.0);
  for (const auto& r : c.rotations) counts[r.term] += 1.0;
  const double lambda = l1_norm(h);
  double chi2 = 0.0;
  int dof = -1;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h.terms()[j].string.is_identity()) {
      EXPECT_EQ(counts[j], 0.0);
      continue;
    }
    const double expected = static_cast<double>(n) * std::abs(h.terms()[j].coefficient) / lambda;
    chi2 += std::pow(counts[j] - expected, 2) / expected;
    ++dof;
  }
  EXPECT_LT(chi2, dof + 5.0 * std::sqrt(2.0 * dof));
}

TEST(QDrift, ChannelApproximatesExactEvolution) {
  const auto s = read_fcidump(data("h2_sto3g.fcidump"));
  const auto h = jordan_wigner(s);
  const auto hf = hartree_fock(s.n_orb(), s.sector());
  const double t = 1.0;
  const double eps = 0.05;
  const auto exact = oracle::evolve(oracle::pauli_matrix(h), to_eigen(prepare_reference(hf)), t);
  const double p_exact = std::norm(exact(static_cast<Eigen::Index>(oracle::basis_index(hf))));
  const int instances = 400;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto psi = evolve_instance(h, hf, t, QDriftDepth::from_epsilon(eps), 3, 1, i);
    const double p = std::norm(psi[oracle::basis_index(hf)]);
    sum += p;
    sum2 += p * p;
  }
  const double mean = sum / instances;
  const double sigma = std::sqrt(std::max(0.0, sum2 / instances - mean * mean) / instances);
  EXPECT_LT(std::abs(mean - p_exact), eps + 5.0 * sigma);
}

TEST(Shots, TinyTimeStepGivesReference) {
  const auto s = read_fcidump(data("h4_chain_sto3g.fcidump"));
  const auto hf = hartree_fock(s.n_orb(), s.sector());
  EvolutionConfig cfg;
  cfg.tau = 1e-8;
  cfg.steps = 2;
  cfg.instances = 3;
  cfg.shots = 200;
  const auto sets = evolve_and_measure(jordan_wigner(s), hf, cfg);
  ASSERT_EQ(sets.size(), 2u);
  for (const auto& set : sets) {
    EXPECT_EQ(set.shots.size(), 600u);
    for (const auto& shot : set.shots) EXPECT_EQ(shot, to_bitstring(hf));
  }
  EXPECT_DOUBLE_EQ(sets[1].time, 2e-8);
}

TEST(Shots, FullDepolarizationIsUniform) {
  auto psi = prepare_reference(Determinant{0b11, 0b11, 4});
  Rng rng(derive_seed(1, Stream::test));
  const std::size_t n = 40000;
  const auto shots = sample_shots(psi, n, 1.0, rng);
  const double sigma = std::sqrt(0.25 / static_cast<double>(n));
  for (int q = 0; q < 8; ++q) {
    double ones = 0.0;
    for (const auto& s : shots) ones += s[static_cast<std::size_t>(q)] == '1';
    EXPECT_NEAR(ones / static_cast<double>(n), 0.5, 5 * sigma) << q;
  }
  EXPECT_THROW(sample_shots(psi, 1, 1.5, rng), ParameterError);
}

TEST(Shots, FollowBornProbabilities) {
  Statevector psi(2);
  psi[0] = std::sqrt(0.2);
  psi[3] = {0.0, std::sqrt(0.8)};
  Rng rng(derive_seed(2, Stream::test));
  const std::size_t n = 50000;
  double both = 0.0;
  for (const auto& s : sample_shots(psi, n, 0.0, rng)) {
    ASSERT_TRUE(s == "00" || s == "11");
    both += s == "11";
  }
  EXPECT_NEAR(both / static_cast<double>(n), 0.8, 5 * std::sqrt(0.16 / static_cast<double>(n)));
}

TEST(Shots, DeterministicAndWorkerIndependent) {
  const auto s = read_fcidump(data("h4_chain_sto3g.fcidump"));
  const auto h = jordan_wigner(s);
  const auto hf = hartree_fock(s.n_orb(), s.sector());
  EvolutionConfig cfg;
  cfg.steps = 2;
  cfg.instances = 6;
  cfg.shots = 64;
  cfg.seed = 42;
  set_worker_count(1);
  const auto a = evolve_and_measure(h, hf, cfg);
  set_worker_count(4);
  const auto b = evolve_and_measure(h, hf, cfg);
  set_worker_count(1);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].shots, b[k].shots);
  cfg.seed = 43;
  EXPECT_NE(evolve_and_measure(h, hf, cfg)[0].shots, a[0].shots);
}

TEST(Shots, NoiseFreeShotsKeepPerSpinParity) {
  const auto s = read_fcidump(data("h4_chain_stretched_sto3g.fcidump"));
  const auto hf = hartree_fock(s.n_orb(), s.sector());
  EvolutionConfig cfg;
  cfg.steps = 2;
  cfg.instances = 8;
  cfg.shots = 256;
  cfg.seed = 5;
  for (const auto& set : evolve_and_measure(jordan_wigner(s), hf, cfg))
    for (const auto& shot : set.shots) {
      const auto d = from_bitstring(shot, s.n_orb());
      EXPECT_EQ(d.n_alpha() % 2, hf.n_alpha() % 2);
      EXPECT_EQ(d.n_beta() % 2, hf.n_beta() % 2);
    }
}

TEST(Evolution, ConfigValidation) {
  EvolutionConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.tau = 0.0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = {};
  cfg.instances = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = {};
  cfg.depolarizing = -0.1;
  EXPECT_THROW(cfg.validate(), ParameterError);
}
