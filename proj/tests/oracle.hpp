#pragma once

// Reference implementations that share no code with the library: a dense
// Fock-space Hamiltonian built by applying ladder operators with explicit
// Jordan-Wigner signs, determinant signs from permutation parity, and exact
// time evolution by dense diagonalization.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsci/determinant.hpp"
#include "qsci/integrals.hpp"
#include "qsci/qubit_hamiltonian.hpp"

namespace oracle {

using Index = std::uint64_t;

// a_q |b> with the sign (-1)^(occupied qubits below q). nullopt for zero.
inline std::optional<std::pair<Index, int>> annihilate(Index b, int q) {
  if (!((b >> q) & 1U)) return std::nullopt;
  int below = 0;
  for (int k = 0; k < q; ++k) below += (b >> k) & 1U;
  return std::pair<Index, int>{b ^ (Index{1} << q), below % 2 ? -1 : 1};
}

inline std::optional<std::pair<Index, int>> create(Index b, int q) {
  if ((b >> q) & 1U) return std::nullopt;
  int below = 0;
  for (int k = 0; k < q; ++k) below += (b >> k) & 1U;
  return std::pair<Index, int>{b | (Index{1} << q), below % 2 ? -1 : 1};
}

// Applies ops right to left: ops = {(q, dagger)...} as written left to right.
inline std::optional<std::pair<Index, int>> apply_string(Index b, const std::vector<std::pair<int, bool>>& ops) {
  int sign = 1;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    auto r = it->second ? create(b, it->first) : annihilate(b, it->first);
    if (!r) return std::nullopt;
    b = r->first;
    sign *= r->second;
  }
  return std::pair<Index, int>{b, sign};
}

inline Index basis_index(const qsci::Determinant& d) { return d.alpha | (d.beta << d.n_orb); }

// Dense H restricted to `basis` (Fock indices): E_core + sum h_pq a+_p a_q +
// 1/2 sum (pq|rs) a+_p a+_r a_s a_q over spin orbitals with matching spins.
inline Eigen::MatrixXd sector_hamiltonian(const qsci::IntegralStore& store, const std::vector<Index>& basis) {
  const int m = store.n_orb();
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::pair<Index, Eigen::Index>> lookup;
  for (Eigen::Index i = 0; i < n; ++i) lookup.emplace_back(basis[static_cast<std::size_t>(i)], i);
  std::sort(lookup.begin(), lookup.end());
  auto find = [&](Index b) -> std::optional<Eigen::Index> {
    auto it = std::lower_bound(lookup.begin(), lookup.end(), std::pair<Index, Eigen::Index>{b, 0});
    if (it == lookup.end() || it->first != b) return std::nullopt;
    return it->second;
  };
  auto so = [m](int p, int spin) { return p + spin * m; };
  for (Eigen::Index col = 0; col < n; ++col) {
    const Index b = basis[static_cast<std::size_t>(col)];
    h(col, col) += store.core_energy();
    for (int s = 0; s < 2; ++s)
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
          const double v = store.one_body(p, q);
          if (v == 0.0) continue;
          auto r = apply_string(b, {{so(p, s), true}, {so(q, s), false}});
          if (!r) continue;
          if (auto row = find(r->first)) h(*row, col) += v * r->second;
        }
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        for (int p = 0; p < m; ++p)
          for (int q = 0; q < m; ++q)
            for (int r = 0; r < m; ++r)
              for (int u = 0; u < m; ++u) {
                const double v = store.two_body(p, q, r, u);
                if (v == 0.0) continue;
                auto res = apply_string(b, {{so(p, s), true}, {so(r, t), true}, {so(u, t), false}, {so(q, s), false}});
                if (!res) continue;
                if (auto row = find(res->first)) h(*row, col) += 0.5 * v * res->second;
              }
  }
  return h;
}

// Every Fock index with the given per-spin counts, in ascending determinant
// order (alpha mask major, beta mask minor).
inline std::vector<Index> sector_basis(int m, int na, int nb) {
  std::vector<std::pair<Index, Index>> dets;
  for (Index a = 0; a < (Index{1} << m); ++a) {
    if (__builtin_popcountll(a) != na) continue;
    for (Index b = 0; b < (Index{1} << m); ++b)
      if (__builtin_popcountll(b) == nb) dets.emplace_back(a, b);
  }
  std::vector<Index> out;
  for (auto [a, b] : dets) out.push_back(a | (b << m));
  return out;
}

// One Pauli word acting on a basis state: P|b> = amp |out>.
inline std::pair<Index, std::complex<double>> pauli_apply(const std::string& word, Index b) {
  std::complex<double> amp = 1.0;
  Index out = b;
  for (std::size_t q = 0; q < word.size(); ++q) {
    const bool bit = (b >> q) & 1U;
    switch (word[q]) {
      case 'X': out ^= Index{1} << q; break;
      case 'Y': out ^= Index{1} << q; amp *= bit ? std::complex<double>(0, -1) : std::complex<double>(0, 1); break;
      case 'Z': if (bit) amp = -amp; break;
      default: break;
    }
  }
  return {out, amp};
}

// Dense matrix of a Pauli sum by explicit Kronecker-free action on basis states.
inline Eigen::MatrixXcd pauli_matrix(const qsci::PauliSum& h) {
  const int nq = h.n_qubits();
  const Index dim = Index{1} << nq;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& term : h.terms()) {
    const auto word = term.string.to_string();
    for (Index b = 0; b < dim; ++b) {
      const auto [out, amp] = pauli_apply(word, b);
      mat(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(b)) += term.coefficient * amp;
    }
  }
  return mat;
}

// Pauli sum projected onto the span of `basis`.
inline Eigen::MatrixXcd pauli_sector_matrix(const qsci::PauliSum& h, const std::vector<Index>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<std::pair<Index, Eigen::Index>> position;
  for (Eigen::Index j = 0; j < n; ++j) position.emplace_back(basis[static_cast<std::size_t>(j)], j);
  std::sort(position.begin(), position.end());
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& term : h.terms()) {
    const auto word = term.string.to_string();
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto [out, amp] = pauli_apply(word, basis[static_cast<std::size_t>(j)]);
      const auto it = std::lower_bound(position.begin(), position.end(), std::pair<Index, Eigen::Index>{out, 0});
      if (it != position.end() && it->first == out) mat(it->second, j) += term.coefficient * amp;
    }
  }
  return mat;
}

// exp(-i H t) psi for Hermitian dense H.
inline Eigen::VectorXcd evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0, -t))
                                      .array()
                                      .exp()
                                      .matrix();
  return es.eigenvectors() * phases.asDiagonal() * (es.eigenvectors().adjoint() * psi);
}

// Sign of the permutation sorting `v` (v holds distinct values).
inline int permutation_parity(std::vector<int> v) {
  int sign = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) sign = -sign;
  return sign;
}

// Spin-orbital labels of d in canonical order: alpha i -> i, beta i -> M + i.
inline std::vector<int> ordered_orbitals(const qsci::Determinant& d) {
  std::vector<int> v;
  for (int i = 0; i < d.n_orb; ++i)
    if ((d.alpha >> i) & 1U) v.push_back(i);
  for (int i = 0; i < d.n_orb; ++i)
    if ((d.beta >> i) & 1U) v.push_back(d.n_orb + i);
  return v;
}

// Sign of d2 relative to d1 when d1's orbital list has each hole replaced in
// place by its particle: parity of the permutation sorting the edited list.
inline int replacement_sign(const qsci::Determinant& d1, const std::vector<std::pair<int, int>>& hole_particle) {
  auto v = ordered_orbitals(d1);
  for (auto [h, p] : hole_particle) *std::find(v.begin(), v.end(), h) = p;
  return permutation_parity(v);
}

}  // namespace oracle
