#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "qsci/determinant.hpp"

namespace qsci {

/// Restricted molecular integrals over spatial orbitals, in Hartree.
/// Two-electron integrals use chemists' notation (pq|rs) and are stored once
/// per 8-fold permutation class.
class IntegralStore {
 public:
  IntegralStore() = default;
  IntegralStore(int n_orb, int n_elec, int ms2);

  int n_orb() const noexcept { return n_orb_; }
  int n_elec() const noexcept { return n_elec_; }
  int ms2() const noexcept { return ms2_; }
  /// (N_alpha, N_beta) implied by NELEC and MS2.
  Sector sector() const;

  double core_energy() const noexcept { return core_; }
  void set_core_energy(double e) noexcept { core_ = e; }

  /// h_pq; symmetric, bounds checked.
  double one_body(int p, int q) const;
  void set_one_body(int p, int q, double value);

  /// (pq|rs) resolved through the 8-fold symmetry; bounds checked.
  double two_body(int p, int q, int r, int s) const;
  void set_two_body(int p, int q, int r, int s, double value);

  /// Unchecked accessors for the matrix-element kernels.
  double h(int p, int q) const noexcept { return one_[static_cast<std::size_t>(p * n_orb_ + q)]; }
  double g(int p, int q, int r, int s) const noexcept { return two_[packed_index(p, q, r, s)]; }

  friend bool operator==(const IntegralStore&, const IntegralStore&) = default;

 private:
  static std::size_t pair_index(int p, int q) noexcept {
    const auto a = static_cast<std::size_t>(p > q ? p : q);
    const auto b = static_cast<std::size_t>(p > q ? q : p);
    return a * (a + 1) / 2 + b;
  }
  static std::size_t packed_index(int p, int q, int r, int s) noexcept {
    const std::size_t pq = pair_index(p, q);
    const std::size_t rs = pair_index(r, s);
    return pq > rs ? pq * (pq + 1) / 2 + rs : rs * (rs + 1) / 2 + pq;
  }
  void check(int p) const;

  int n_orb_ = 0;
  int n_elec_ = 0;
  int ms2_ = 0;
  double core_ = 0.0;
  std::vector<double> one_;
  std::vector<double> two_;
};

/// Reads an FCIDUMP (namelist header with NORB, NELEC, MS2; then
/// `value p q r s` lines with 1-based indices). Later duplicates win.
IntegralStore parse_fcidump(std::istream& in);
IntegralStore read_fcidump(const std::string& path);

/// Writes every nonzero unique integral with round-trip precision.
void write_fcidump(std::ostream& out, const IntegralStore& store);

}  // namespace qsci
