#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsci/rng.hpp"

namespace qsci {

using Mask = std::uint64_t;

inline constexpr int kMaxOrbitals = 64;

enum class Spin : std::uint8_t { alpha = 0, beta = 1 };

struct Sector {
  int n_alpha = 0;
  int n_beta = 0;
  friend bool operator==(const Sector&, const Sector&) = default;
};

struct SpinOrbital {
  Spin spin = Spin::alpha;
  int index = 0;
  friend bool operator==(const SpinOrbital&, const SpinOrbital&) = default;
};

/// Slater determinant as a pair of occupation masks over n_orb spatial
/// orbitals. Bit i of `alpha` set means spatial orbital i holds an alpha
/// electron. Ordering is lexicographic on (alpha, beta, n_orb).
struct Determinant {
  Mask alpha = 0;
  Mask beta = 0;
  int n_orb = 0;

  Mask mask(Spin s) const noexcept { return s == Spin::alpha ? alpha : beta; }
  Mask& mask(Spin s) noexcept { return s == Spin::alpha ? alpha : beta; }
  bool occupied(Spin s, int i) const noexcept { return (mask(s) >> i) & 1U; }
  int n_alpha() const noexcept { return std::popcount(alpha); }
  int n_beta() const noexcept { return std::popcount(beta); }
  Sector sector() const noexcept { return {n_alpha(), n_beta()}; }

  friend auto operator<=>(const Determinant&, const Determinant&) = default;
};

/// Mask with the lowest n bits set (n in [0, 64]).
constexpr Mask low_bits(int n) noexcept {
  return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

/// Lowest-index orbitals filled per spin (the RHF reference in canonical order).
Determinant hartree_fock(int n_orb, Sector sector);

/// Decodes a spin-blocked measurement string: characters [0, M) are alpha
/// occupations of orbitals 0..M-1, characters [M, 2M) are beta occupations.
Determinant from_bitstring(std::string_view bits, int n_orb);
std::string to_bitstring(const Determinant& d);

/// Occupied orbital indices of one spin channel, ascending.
std::vector<int> occupied_list(Mask m);

inline constexpr int kBeyondDouble = 3;

/// Excitation relating two determinants. Holes are vacated in the first
/// argument, particles filled in the second. Within one spin channel holes
/// and particles are sorted ascending and paired positionally; alpha entries
/// precede beta entries. `phase` is the fermionic sign s in
/// d2 = s * (particles created, holes annihilated) d1.
struct ExcitationInfo {
  int degree = 0;  ///< 0, 1, 2 or kBeyondDouble
  int count = 0;   ///< valid entries in holes/particles (== degree when degree <= 2)
  std::array<SpinOrbital, 2> holes{};
  std::array<SpinOrbital, 2> particles{};
  int phase = 1;
};

/// Sign picked up by moving electrons past occupied orbitals strictly
/// between `from` and `to` within one spin mask.
inline int single_phase(Mask m, int from, int to) noexcept {
  const int lo = from < to ? from : to;
  const int hi = from < to ? to : from;
  const Mask between = low_bits(hi) & ~low_bits(lo + 1);
  return (std::popcount(m & between) & 1) ? -1 : 1;
}

int excitation_degree(const Determinant& d1, const Determinant& d2) noexcept;
ExcitationInfo excitation_between(const Determinant& d1, const Determinant& d2);

/// Applies holes -> particles pairwise in order. Throws InvalidExcitation when
/// a hole is empty or a particle is already filled at the time it is applied.
std::pair<Determinant, int> apply_excitation(const Determinant& d,
                                             std::span<const SpinOrbital> holes,
                                             std::span<const SpinOrbital> particles);

/// Calls fn(excited, info) once for every distinct single and double
/// excitation of d (sector preserving per spin channel).
template <typename Fn>
void for_each_connected(const Determinant& d, Fn&& fn);

std::vector<std::pair<Determinant, ExcitationInfo>> connected_determinants(const Determinant& d);

/// C(M, Na) * C(M, Nb); throws CapabilityError when it exceeds 64 bits.
std::uint64_t sector_dimension(int n_orb, Sector sector);

/// Every determinant of the sector in ascending order.
std::vector<Determinant> enumerate_sector(int n_orb, Sector sector);

/* ------------------------------------------------------------------------- */

namespace detail {

template <typename Fn>
void for_each_same_spin(const Determinant& d, Spin s, Fn& fn) {
  const Mask occ = d.mask(s);
  const Mask vir = low_bits(d.n_orb) & ~occ;
  const auto occs = occupied_list(occ);
  const auto virs = occupied_list(vir);
  for (int i : occs) {
    for (int a : virs) {
      Determinant e = d;
      e.mask(s) ^= (Mask{1} << i) | (Mask{1} << a);
      ExcitationInfo info;
      info.degree = info.count = 1;
      info.holes[0] = {s, i};
      info.particles[0] = {s, a};
      info.phase = single_phase(occ, i, a);
      fn(static_cast<const Determinant&>(e), static_cast<const ExcitationInfo&>(info));
    }
  }
  for (std::size_t x = 0; x < occs.size(); ++x) {
    for (std::size_t y = x + 1; y < occs.size(); ++y) {
      const int i = occs[x];
      const int j = occs[y];
      for (std::size_t u = 0; u < virs.size(); ++u) {
        for (std::size_t w = u + 1; w < virs.size(); ++w) {
          const int a = virs[u];
          const int b = virs[w];
          Mask m = occ;
          int phase = single_phase(m, i, a);
          m ^= (Mask{1} << i) | (Mask{1} << a);
          phase *= single_phase(m, j, b);
          m ^= (Mask{1} << j) | (Mask{1} << b);
          Determinant e = d;
          e.mask(s) = m;
          ExcitationInfo info;
          info.degree = info.count = 2;
          info.holes = {SpinOrbital{s, i}, SpinOrbital{s, j}};
          info.particles = {SpinOrbital{s, a}, SpinOrbital{s, b}};
          info.phase = phase;
          fn(static_cast<const Determinant&>(e), static_cast<const ExcitationInfo&>(info));
        }
      }
    }
  }
}

}  // namespace detail

template <typename Fn>
void for_each_connected(const Determinant& d, Fn&& fn) {
  detail::for_each_same_spin(d, Spin::alpha, fn);
  detail::for_each_same_spin(d, Spin::beta, fn);
  const Mask full = low_bits(d.n_orb);
  const auto occ_a = occupied_list(d.alpha);
  const auto vir_a = occupied_list(full & ~d.alpha);
  const auto occ_b = occupied_list(d.beta);
  const auto vir_b = occupied_list(full & ~d.beta);
  for (int i : occ_a) {
    for (int a : vir_a) {
      const int pa = single_phase(d.alpha, i, a);
      const Mask alpha = d.alpha ^ ((Mask{1} << i) | (Mask{1} << a));
      for (int j : occ_b) {
        for (int b : vir_b) {
          Determinant e{alpha, d.beta ^ ((Mask{1} << j) | (Mask{1} << b)), d.n_orb};
          ExcitationInfo info;
          info.degree = info.count = 2;
          info.holes = {SpinOrbital{Spin::alpha, i}, SpinOrbital{Spin::beta, j}};
          info.particles = {SpinOrbital{Spin::alpha, a}, SpinOrbital{Spin::beta, b}};
          info.phase = pa * single_phase(d.beta, j, b);
          fn(static_cast<const Determinant&>(e), static_cast<const ExcitationInfo&>(info));
        }
      }
    }
  }
}

}  // namespace qsci

template <>
struct std::hash<qsci::Determinant> {
  std::size_t operator()(const qsci::Determinant& d) const noexcept {
    return static_cast<std::size_t>(
        qsci::splitmix64(qsci::splitmix64(d.alpha) ^ (d.beta + 0x9e3779b97f4a7c15ULL)));
  }
};
