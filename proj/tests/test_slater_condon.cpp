#include <gtest/gtest.h>

#include <algorithm>

#include "oracle.hpp"
#include "qsci/eigensolver.hpp"
#include "qsci/error.hpp"
#include "qsci/integrals.hpp"
#include "qsci/slater_condon.hpp"

using namespace qsci;

namespace {

std::string data(const char* name) { return std::string(QSCI_DATA_DIR) + "/" + name; }

IntegralStore random_store(int m, int n_elec, std::uint64_t seed, int ms2 = 0) {
  IntegralStore s(m, n_elec, ms2);
  Rng rng(derive_seed(seed, Stream::test));
  s.set_core_energy(rng.uniform());
  for (int p = 0; p < m; ++p)
    for (int q = 0; q <= p; ++q) s.set_one_body(p, q, rng.uniform() - 0.5 - (p == q ? 2.0 : 0.0));
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int t = 0; t < m; ++t) s.set_two_body(p, q, r, t, 0.2 * (rng.uniform() - 0.3));
  return s;
}

void expect_matches_oracle(const IntegralStore& s, double tol) {
  const auto sector = s.sector();
  const auto dets = enumerate_sector(s.n_orb(), sector);
  std::vector<oracle::Index> basis;
  for (const auto& d : dets) basis.push_back(oracle::basis_index(d));
  const auto dense = oracle::sector_hamiltonian(s, basis);
  const auto m = build_interaction_matrix(dets, s);
  for (std::size_t k = 0; k < dets.size(); ++k)
    for (std::size_t l = 0; l < dets.size(); ++l) {
      ASSERT_NEAR(m.at(k, l), dense(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)), tol)
          << to_bitstring(dets[k]) << " " << to_bitstring(dets[l]);
      ASSERT_NEAR(matrix_element(dets[k], dets[l], s), dense(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)),
                  tol);
    }
}

}  // namespace

TEST(MatrixElement, BeyondDoubleIsZero) {
  const auto s = read_fcidump(data("h4_chain_sto3g.fcidump"));
  const Determinant a{0b0011, 0b0011, 4};
  const Determinant b{0b1100, 0b0110, 4};
  EXPECT_EQ(excitation_degree(a, b), 3);
  EXPECT_EQ(matrix_element(a, b, s), 0.0);
}

TEST(MatrixElement, MismatchedOrbitals) {
  const auto s = read_fcidump(data("h2_sto3g.fcidump"));
  EXPECT_THROW(matrix_element(Determinant{1, 1, 2}, Determinant{1, 1, 3}, s), DimensionError);
}

TEST(MatrixElement, H2MatchesFockOracle) { expect_matches_oracle(read_fcidump(data("h2_sto3g.fcidump")), 1e-12); }
TEST(MatrixElement, H4MatchesFockOracle) { expect_matches_oracle(read_fcidump(data("h4_chain_sto3g.fcidump")), 1e-12); }
TEST(MatrixElement, RandomIntegralsMatchFockOracle) {
  expect_matches_oracle(random_store(4, 4, 11), 1e-12);
  expect_matches_oracle(random_store(5, 4, 12), 1e-12);
  expect_matches_oracle(random_store(5, 5, 13, 1), 1e-12);
}

TEST(Build, SingleReference) {
  const auto s = read_fcidump(data("h2_sto3g.fcidump"));
  const auto hf = hartree_fock(2, {1, 1});
  const std::vector<Determinant> d{hf};
  const auto m = build_interaction_matrix(d, s);
  ASSERT_EQ(m.dimension(), 1u);
  EXPECT_EQ(m.at(0, 0), diagonal_element(hf, s));
  EXPECT_NEAR(m.at(0, 0), -1.1167593074, 1e-9);
}

TEST(Build, Errors) {
  const auto s = read_fcidump(data("h2_sto3g.fcidump"));
  EXPECT_THROW(build_interaction_matrix({}, s), DimensionError);
  const auto hf = hartree_fock(2, {1, 1});
  const std::vector<Determinant> dup{hf, hf};
  EXPECT_THROW(build_interaction_matrix(dup, s), InputError);
}

TEST(Build, ExactlySymmetric) {
  const auto s = read_fcidump(data("lih_sto3g.fcidump"));
  const auto dets = enumerate_sector(6, {2, 2});
  const auto m = build_interaction_matrix(dets, s);
  for (std::size_t k = 0; k < m.dimension(); ++k) {
    ASSERT_EQ(m.diagonal(k), m.at(k, k));
    for (const auto& e : m.row(k)) ASSERT_EQ(e.value, m.at(e.col, k));
  }
}

TEST(Build, HashedPathMatchesDirectElements) {
  const auto s = random_store(8, 8, 21);
  auto dets = enumerate_sector(8, {4, 4});
  Rng rng(derive_seed(5, Stream::test));
  for (std::size_t i = dets.size() - 1; i > 0; --i) std::swap(dets[i], dets[rng.below(i + 1)]);
  dets.resize(2600);
  ASSERT_GT(dets.size(), kAllPairsThreshold);
  const auto m = build_interaction_matrix(dets, s);
  std::size_t connected = 0;
  for (std::size_t k = 0; k < dets.size(); ++k)
    for (std::size_t l = 0; l < dets.size(); ++l) connected += excitation_degree(dets[k], dets[l]) <= 2;
  std::size_t stored = 0;
  for (std::size_t k = 0; k < m.dimension(); ++k) stored += m.row(k).size();
  EXPECT_EQ(stored, connected);
  for (int trial = 0; trial < 20000; ++trial) {
    const auto k = rng.below(dets.size()), l = rng.below(dets.size());
    const auto lo = std::min(k, l), hi = std::max(k, l);
    ASSERT_EQ(m.at(k, l), lo == hi ? diagonal_element(dets[k], s) : matrix_element(dets[lo], dets[hi], s));
  }
}

TEST(Extend, EmptyAdditionIsIdentity) {
  const auto s = read_fcidump(data("h4_chain_sto3g.fcidump"));
  const std::vector<Determinant> d{hartree_fock(4, {2, 2})};
  const auto m = build_interaction_matrix(d, s);
  EXPECT_EQ(extend_interaction_matrix(m, d, {}, s), m);
}

TEST(Extend, EqualsRebuildOnUnion) {
  const auto s = read_fcidump(data("h4_chain_sto3g.fcidump"));
  const auto hf = hartree_fock(4, {2, 2});
  std::vector<Determinant> d{hf};
  std::vector<Determinant> added;
  for (const auto& [e, info] : connected_determinants(hf)) added.push_back(e);
  const auto ext = extend_interaction_matrix(build_interaction_matrix(d, s), d, added, s);
  d.insert(d.end(), added.begin(), added.end());
  EXPECT_EQ(ext, build_interaction_matrix(d, s));
}

TEST(Extend, SuccessiveEqualsCombined) {
  const auto s = read_fcidump(data("lih_sto3g.fcidump"));
  auto all = enumerate_sector(6, {2, 2});
  Rng rng(derive_seed(9, Stream::test));
  for (std::size_t i = all.size() - 1; i > 0; --i) std::swap(all[i], all[rng.below(i + 1)]);
  const std::vector<Determinant> a(all.begin(), all.begin() + 40), b(all.begin() + 40, all.begin() + 90),
      c(all.begin() + 90, all.end());
  const auto ma = build_interaction_matrix(a, s);
  std::vector<Determinant> ab(a);
  ab.insert(ab.end(), b.begin(), b.end());
  const auto two_step = extend_interaction_matrix(extend_interaction_matrix(ma, a, b, s), ab, c, s);
  std::vector<Determinant> bc(b);
  bc.insert(bc.end(), c.begin(), c.end());
  EXPECT_EQ(two_step, extend_interaction_matrix(ma, a, bc, s));
  EXPECT_EQ(two_step, build_interaction_matrix(all, s));
}

TEST(Extend, OverlapRejected) {
  const auto s = read_fcidump(data("h2_sto3g.fcidump"));
  const std::vector<Determinant> d{hartree_fock(2, {1, 1})};
  EXPECT_THROW(extend_interaction_matrix(build_interaction_matrix(d, s), d, d, s), InputError);
}

TEST(Restrict, EqualsRebuildOnSubset) {
  const auto s = read_fcidump(data("lih_sto3g.fcidump"));
  const auto all = enumerate_sector(6, {2, 2});
  std::vector<std::size_t> keep;
  std::vector<Determinant> sub;
  for (std::size_t k = 0; k < all.size(); k += 3) {
    keep.push_back(k);
    sub.push_back(all[k]);
  }
  EXPECT_EQ(build_interaction_matrix(all, s).restricted(keep), build_interaction_matrix(sub, s));
}

TEST(Variational, NestedSubspacesLowerEnergy) {
  const auto s = read_fcidump(data("lih_sto3g.fcidump"));
  auto all = enumerate_sector(6, {2, 2});
  const auto hf = hartree_fock(6, {2, 2});
  std::erase(all, hf);
  Rng rng(derive_seed(3, Stream::test));
  for (int trial = 0; trial < 5; ++trial) {
    for (std::size_t i = all.size() - 1; i > 0; --i) std::swap(all[i], all[rng.below(i + 1)]);
    std::vector<Determinant> d{hf};
    double prev = diagonal_element(hf, s);
    for (std::size_t k = 0; k < all.size(); k += 20) {
      d.insert(d.end(), all.begin() + static_cast<std::ptrdiff_t>(k),
               all.begin() + static_cast<std::ptrdiff_t>(std::min(all.size(), k + 20)));
      const double e = davidson_lowest(build_interaction_matrix(d, s)).energy;
      EXPECT_LE(e, prev + 1e-9);
      prev = e;
    }
    EXPECT_NEAR(prev, -7.8824019323, 1e-8);
  }
}
