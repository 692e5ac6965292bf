#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "qsci/baselines.hpp"
#include "qsci/error.hpp"
#include "qsci/qubit_hamiltonian.hpp"

using namespace qsci;

namespace {

std::string data(const char* name) { return std::string(QSCI_DATA_DIR) + "/" + name; }

double coefficient(const PauliSum& h, const std::string& word) {
  for (const auto& t : h.terms())
    if (t.string.to_string() == word) return t.coefficient;
  return 0.0;
}

}  // namespace

TEST(PauliString, ParseAndPrint) {
  const auto p = PauliString::parse("IXYZ");
  EXPECT_EQ(p.n_qubits, 4);
  EXPECT_EQ(p.x, 0b0110u);
  EXPECT_EQ(p.z, 0b1100u);
  EXPECT_EQ(p.to_string(), "IXYZ");
  EXPECT_THROW(PauliString::parse("IXQ"), FormatError);
}

TEST(PauliSum, MergesPrunesAndSorts) {
  const auto h = PauliSum::from_terms(2, {{0.5, PauliString::parse("XZ")},
                                          {0.25, PauliString::parse("XZ")},
                                          {1e-13, PauliString::parse("ZZ")},
                                          {-0.1, PauliString::parse("II")}});
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.identity_coefficient(), -0.1);
  EXPECT_EQ(coefficient(h, "XZ"), 0.75);
}

TEST(L1Norm, Examples) {
  const auto h = PauliSum::from_terms(2, {{0.5, PauliString::parse("XZ")}, {-0.25, PauliString::parse("YY")}});
  EXPECT_EQ(l1_norm(h), 0.75);
  EXPECT_EQ(l1_norm(PauliSum::from_terms(2, {{3.0, PauliString::parse("II")}})), 0.0);
  const auto h2 = jordan_wigner(read_fcidump(data("h2_sto3g.fcidump")));
  double sum = 0.0;
  for (const auto& t : h2.terms())
    if (t.string.to_string() != "IIII") sum += std::abs(t.coefficient);
  EXPECT_NEAR(l1_norm(h2), sum, 1e-15);
}

TEST(JordanWigner, SingleNumberTerm) {
  IntegralStore s(2, 2, 0);
  s.set_one_body(0, 0, -1.5);
  const auto h = jordan_wigner(s);
  EXPECT_NEAR(h.identity_coefficient(), -1.5, 1e-15);  // -1.5/2 from each spin
  EXPECT_NEAR(coefficient(h, "ZIII"), 0.75, 1e-15);
  EXPECT_NEAR(coefficient(h, "IIZI"), 0.75, 1e-15);
  EXPECT_EQ(h.size(), 3u);
}

TEST(JordanWigner, NumberOperatorOnReference) {
  IntegralStore s(3, 4, 0);
  for (int i = 0; i < 3; ++i) s.set_one_body(i, i, 1.0);
  const auto h = jordan_wigner(s);
  EXPECT_NEAR(h.identity_coefficient(), 3.0, 1e-15);
  // <HF|N|HF>: Z on occupied qubits contributes -1/2 each.
  const auto hf = hartree_fock(3, {2, 2});
  double e = 0.0;
  for (const auto& t : h.terms()) {
    ASSERT_EQ(t.string.x, 0u);
    const Mask occ = hf.alpha | (hf.beta << 3);
    e += t.coefficient * ((std::popcount(t.string.z & occ) % 2) ? -1.0 : 1.0);
  }
  EXPECT_NEAR(e, 4.0, 1e-14);
}

TEST(JordanWigner, CoefficientsRealAndPaulisHermitian) {
  const auto h = jordan_wigner(read_fcidump(data("lih_sto3g.fcidump")));
  EXPECT_EQ(h.n_qubits(), 12);
  for (const auto& t : h.terms()) {
    EXPECT_TRUE(std::isfinite(t.coefficient));
    EXPECT_EQ(std::popcount(t.string.x & t.string.z) % 2, 0) << t.string.to_string();
  }
}

TEST(JordanWigner, SectorSpectrumMatchesSlaterCondon) {
  for (const char* name : {"h2_sto3g.fcidump", "h4_chain_sto3g.fcidump", "lih_sto3g.fcidump"}) {
    const auto s = read_fcidump(data(name));
    const auto h = jordan_wigner(s);
    const auto mat = oracle::pauli_matrix(h);
    const auto basis = oracle::sector_basis(s.n_orb(), s.sector().n_alpha, s.sector().n_beta);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd sec(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto v = mat(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)]),
                           static_cast<Eigen::Index>(basis[static_cast<std::size_t>(j)]));
        ASSERT_NEAR(v.imag(), 0.0, 1e-12);
        sec(i, j) = v.real();
      }
    const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sec).eigenvalues()(0);
    EXPECT_NEAR(lowest, fci_solve(s, s.sector()).energy, 1e-10) << name;
  }
}

TEST(JordanWigner, MatchesLadderOracleOnWholeFockSpace) {
  const auto s = read_fcidump(data("h4_chain_sto3g.fcidump"));
  const auto mat = oracle::pauli_matrix(jordan_wigner(s));
  std::vector<oracle::Index> all(256);
  for (oracle::Index b = 0; b < 256; ++b) all[b] = b;
  const auto fock = oracle::sector_hamiltonian(s, all);
  EXPECT_LT((mat - fock.cast<std::complex<double>>()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(JordanWigner, WeightedGeneratorIdentity) {
  const auto h = jordan_wigner(read_fcidump(data("lih_sto3g.fcidump")));
  const double lambda = l1_norm(h);
  for (const auto& t : h.terms()) {
    if (t.string.is_identity()) continue;
    const double p = std::abs(t.coefficient) / lambda;
    EXPECT_NEAR(p * lambda * (t.coefficient < 0 ? -1.0 : 1.0), t.coefficient, 1e-15);
  }
}

TEST(JordanWigner, CapabilityLimit) { EXPECT_THROW(jordan_wigner(IntegralStore(33, 2, 0)), CapabilityError); }

TEST(PauliSum, TextRoundTrip) {
  const auto h = jordan_wigner(read_fcidump(data("h2_sto3g.fcidump")));
  std::stringstream buf;
  write_pauli_sum(buf, h);
  const auto back = read_pauli_sum(buf);
  ASSERT_EQ(back.size(), h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    EXPECT_EQ(back.terms()[i].coefficient, h.terms()[i].coefficient);
    EXPECT_EQ(back.terms()[i].string, h.terms()[i].string);
  }
}
