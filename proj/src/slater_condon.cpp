#include "qsci/slater_condon.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "qsci/error.hpp"
#include "qsci/parallel.hpp"

namespace qsci {

double diagonal_element(const Determinant& d, const IntegralStore& store) {
  const auto occ_a = occupied_list(d.alpha);
  const auto occ_b = occupied_list(d.beta);
  double e = store.core_energy();
  for (int i : occ_a) e += store.h(i, i);
  for (int i : occ_b) e += store.h(i, i);
  // Same-spin pairs carry Coulomb minus exchange, opposite-spin pairs Coulomb only.
  auto same_spin = [&](const std::vector<int>& occ) {
    double s = 0.0;
    for (std::size_t x = 0; x < occ.size(); ++x)
      for (std::size_t y = x + 1; y < occ.size(); ++y) {
        const int i = occ[x];
        const int j = occ[y];
        s += store.g(i, i, j, j) - store.g(i, j, j, i);
      }
    return s;
  };
  e += same_spin(occ_a) + same_spin(occ_b);
  for (int i : occ_a)
    for (int j : occ_b) e += store.g(i, i, j, j);
  return e;
}

double matrix_element(const Determinant& d1, const ExcitationInfo& info, const IntegralStore& store) {
  switch (info.degree) {
    case 0:
      return diagonal_element(d1, store);
    case 1: {
      const auto hole = info.holes[0];
      const auto part = info.particles[0];
      const int i = hole.index;
      const int a = part.index;
      double v = store.h(a, i);
      for (Spin s : {Spin::alpha, Spin::beta}) {
        for (Mask m = d1.mask(s); m; m &= m - 1) {
          const int k = std::countr_zero(m);
          v += store.g(a, i, k, k);
          if (s == hole.spin) v -= store.g(a, k, k, i);
        }
      }
      return info.phase * v;
    }
    case 2: {
      const auto i = info.holes[0];
      const auto j = info.holes[1];
      const auto a = info.particles[0];
      const auto b = info.particles[1];
      double v = store.g(a.index, i.index, b.index, j.index);
      if (i.spin == j.spin) v -= store.g(a.index, j.index, b.index, i.index);
      return info.phase * v;
    }
    default:
      return 0.0;
  }
}

double matrix_element(const Determinant& d1, const Determinant& d2, const IntegralStore& store) {
  if (d1.n_orb != d2.n_orb) throw DimensionError("determinants have different orbital counts");
  if (excitation_degree(d1, d2) > 2) return 0.0;
  return matrix_element(d1, excitation_between(d1, d2), store);
}

std::size_t SparseInteractionMatrix::nonzeros() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

double SparseInteractionMatrix::at(std::size_t k, std::size_t l) const {
  const auto& r = rows_.at(k);
  auto it = std::lower_bound(r.begin(), r.end(), l,
                             [](const MatrixEntry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == l) ? it->value : 0.0;
}

void SparseInteractionMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  parallel_for((rows_.size() + 255) / 256, [&](std::size_t block) {
    const std::size_t end = std::min(rows_.size(), (block + 1) * 256);
    for (std::size_t k = block * 256; k < end; ++k) {
      double s = 0.0;
      for (const auto& e : rows_[k]) s += e.value * x[e.col];
      y[k] = s;
    }
  });
}

std::vector<double> SparseInteractionMatrix::dense() const {
  const std::size_t n = rows_.size();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& e : rows_[k]) out[k * n + e.col] = e.value;
  return out;
}

SparseInteractionMatrix SparseInteractionMatrix::from_dense(std::span<const double> a, std::size_t n) {
  if (a.size() != n * n) throw DimensionError("dense matrix size is not n * n");
  SparseInteractionMatrix out;
  out.rows_.resize(n);
  out.diag_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.diag_[k] = a[k * n + k];
    for (std::size_t l = 0; l < n; ++l) {
      if (a[k * n + l] != a[l * n + k]) throw InputError("matrix is not symmetric");
      if (k == l || a[k * n + l] != 0.0) out.rows_[k].push_back({static_cast<std::uint32_t>(l), a[k * n + l]});
    }
  }
  return out;
}

SparseInteractionMatrix SparseInteractionMatrix::restricted(std::span<const std::size_t> keep) const {
  constexpr auto absent = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> remap(rows_.size(), absent);
  for (std::size_t n = 0; n < keep.size(); ++n) {
    if (keep[n] >= rows_.size() || (n > 0 && keep[n] <= keep[n - 1]))
      throw InputError("restriction indices must be ascending and in range");
    remap[keep[n]] = static_cast<std::uint32_t>(n);
  }
  SparseInteractionMatrix out;
  out.rows_.resize(keep.size());
  out.diag_.resize(keep.size());
  for (std::size_t n = 0; n < keep.size(); ++n) {
    out.diag_[n] = diag_[keep[n]];
    for (const auto& e : rows_[keep[n]])
      if (remap[e.col] != absent) out.rows_[n].push_back({remap[e.col], e.value});
  }
  return out;
}

namespace {

using Upper = std::vector<std::vector<MatrixEntry>>;

void check_unique(std::span<const Determinant> a, std::span<const Determinant> b, bool overlap_only) {
  std::unordered_set<Determinant> seen;
  seen.reserve(a.size() + b.size());
  for (const auto& d : a)
    if (!seen.insert(d).second && !overlap_only) throw InputError("duplicate determinant in list");
  for (const auto& d : b)
    if (!seen.insert(d).second)
      throw InputError(overlap_only ? "new determinants overlap the existing set"
                                    : "duplicate determinant in list");
}

std::unordered_map<Determinant, std::uint32_t> index_map(std::span<const Determinant> dets,
                                                         std::size_t offset) {
  std::unordered_map<Determinant, std::uint32_t> map;
  map.reserve(dets.size());
  for (std::size_t k = 0; k < dets.size(); ++k)
    map.emplace(dets[k], static_cast<std::uint32_t>(offset + k));
  return map;
}

// For row k (global index) lists entries l >= first_col with l > k among
// `cols` (global indices first_col + position), sorted by l.
std::vector<MatrixEntry> upper_row(std::size_t k, const Determinant& dk,
                                   std::span<const Determinant> cols, std::size_t first_col,
                                   const std::unordered_map<Determinant, std::uint32_t>* map,
                                   const IntegralStore& store) {
  std::vector<MatrixEntry> out;
  const std::size_t start = k + 1 > first_col ? k + 1 - first_col : 0;
  if (map == nullptr) {
    for (std::size_t n = start; n < cols.size(); ++n) {
      const auto& dl = cols[n];
      if (excitation_degree(dk, dl) > 2) continue;
      const auto info = excitation_between(dk, dl);
      if (info.degree > 2) continue;
      const double v = matrix_element(dk, info, store);
      if (v != 0.0) out.push_back({static_cast<std::uint32_t>(first_col + n), v});
    }
  } else {
    for_each_connected(dk, [&](const Determinant& e, const ExcitationInfo& info) {
      auto it = map->find(e);
      if (it == map->end() || it->second < first_col + start) return;
      const double v = matrix_element(dk, info, store);
      if (v != 0.0) out.push_back({it->second, v});
    });
    std::sort(out.begin(), out.end(),
              [](const MatrixEntry& a, const MatrixEntry& b) { return a.col < b.col; });
  }
  return out;
}

}  // namespace

SparseInteractionMatrix build_interaction_matrix(std::span<const Determinant> dets,
                                                 const IntegralStore& store) {
  if (dets.empty()) throw DimensionError("cannot build a 0x0 interaction matrix");
  check_unique(dets, {}, false);
  for (const auto& d : dets)
    if (d.n_orb != store.n_orb()) throw DimensionError("determinant orbital count mismatch");
  const std::size_t n = dets.size();
  std::unordered_map<Determinant, std::uint32_t> map;
  const bool hashed = n > kAllPairsThreshold;
  if (hashed) map = index_map(dets, 0);

  SparseInteractionMatrix out;
  out.diag_.resize(n);
  Upper upper(n);
  parallel_for(n, [&](std::size_t k) {
    out.diag_[k] = diagonal_element(dets[k], store);
    upper[k] = upper_row(k, dets[k], dets, 0, hashed ? &map : nullptr, store);
  });
  out.rows_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.rows_[k].push_back({static_cast<std::uint32_t>(k), out.diag_[k]});
    for (const auto& e : upper[k]) {
      out.rows_[k].push_back(e);
      out.rows_[e.col].push_back({static_cast<std::uint32_t>(k), e.value});
    }
  }
  return out;
}

SparseInteractionMatrix extend_interaction_matrix(const SparseInteractionMatrix& old,
                                                  std::span<const Determinant> existing,
                                                  std::span<const Determinant> added,
                                                  const IntegralStore& store) {
  if (old.dimension() != existing.size())
    throw DimensionError("matrix dimension does not match the existing determinant list");
  if (added.empty()) return old;
  if (existing.empty()) return build_interaction_matrix(added, store);
  check_unique(existing, added, true);
  const std::size_t n_old = existing.size();
  const std::size_t n = n_old + added.size();
  std::unordered_map<Determinant, std::uint32_t> map;
  const bool hashed = n > kAllPairsThreshold;
  if (hashed) map = index_map(added, n_old);

  // Upper-triangle entries that land in the new columns, for every row.
  std::vector<double> diag_new(added.size());
  Upper upper(n);
  parallel_for(n, [&](std::size_t k) {
    const Determinant& dk = k < n_old ? existing[k] : added[k - n_old];
    if (k >= n_old) diag_new[k - n_old] = diagonal_element(dk, store);
    upper[k] = upper_row(k, dk, added, n_old, hashed ? &map : nullptr, store);
  });

  SparseInteractionMatrix out;
  out.rows_.resize(n);
  out.diag_.resize(n);
  std::copy(old.diag_.begin(), old.diag_.end(), out.diag_.begin());
  std::copy(diag_new.begin(), diag_new.end(), out.diag_.begin() + static_cast<std::ptrdiff_t>(n_old));
  for (std::size_t k = 0; k < n_old; ++k) out.rows_[k] = old.rows_[k];
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= n_old) out.rows_[k].push_back({static_cast<std::uint32_t>(k), out.diag_[k]});
    for (const auto& e : upper[k]) {
      out.rows_[k].push_back(e);
      out.rows_[e.col].push_back({static_cast<std::uint32_t>(k), e.value});
    }
  }
  return out;
}

}  // namespace qsci
