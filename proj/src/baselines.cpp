#include "qsci/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "qsci/eigensolver.hpp"
#include "qsci/error.hpp"
#include "qsci/parallel.hpp"
#include "qsci/pt2.hpp"
#include "qsci/slater_condon.hpp"

namespace qsci {

namespace {

struct Working {
  std::vector<Determinant> dets;
  SparseInteractionMatrix matrix;
  double energy = 0.0;
  std::vector<double> vector;
};

Working start(const IntegralStore& store, Sector sector) {
  Working w;
  w.dets = {hartree_fock(store.n_orb(), sector)};
  w.matrix = build_interaction_matrix(w.dets, store);
  w.energy = w.matrix.diagonal(0);
  w.vector = {1.0};
  return w;
}

void grow(Working& w, std::span<const Determinant> added, const IntegralStore& store) {
  w.matrix = extend_interaction_matrix(w.matrix, w.dets, added, store);
  w.dets.insert(w.dets.end(), added.begin(), added.end());
  w.vector.resize(w.dets.size(), 0.0);
  auto r = davidson_lowest(w.matrix, w.vector);
  w.energy = r.energy;
  w.vector = std::move(r.vector);
}

TraceRecord row(std::uint64_t iteration, const Working& w, double delta) {
  return {iteration, 0, w.dets.size(), w.energy, delta, w.dets.size(), w.energy};
}

BaselineResult finish(std::string method, Working w, std::vector<TraceRecord> trace) {
  return {std::move(method), std::move(w.dets), w.energy, std::move(w.vector), std::move(trace), 0};
}

}  // namespace

BaselineResult fci_solve(const IntegralStore& store, Sector sector) {
  const auto dim = sector_dimension(store.n_orb(), sector);
  if (dim > kFciDimensionCap)
    throw CapabilityError("sector dimension " + std::to_string(dim) + " exceeds the FCI cap of " +
                          std::to_string(kFciDimensionCap));
  Working w;
  w.dets = enumerate_sector(store.n_orb(), sector);
  w.matrix = build_interaction_matrix(w.dets, store);
  std::vector<double> guess(w.dets.size(), 0.0);
  const auto hf = hartree_fock(store.n_orb(), sector);
  guess[static_cast<std::size_t>(std::lower_bound(w.dets.begin(), w.dets.end(), hf) - w.dets.begin())] = 1.0;
  auto r = davidson_lowest(w.matrix, guess);
  w.energy = r.energy;
  w.vector = std::move(r.vector);
  std::vector<TraceRecord> trace{row(0, w, 0.0)};
  return finish("fci", std::move(w), std::move(trace));
}

BaselineResult hci_run(const IntegralStore& store, Sector sector, double delta, double conv_tol,
                       std::size_t max_dim) {
  if (!(delta > 0)) throw ParameterError("HCI threshold must be positive");
  Working w = start(store, sector);
  std::vector<TraceRecord> trace{row(0, w, 0.0)};
  for (std::uint64_t it = 1; w.dets.size() < max_dim; ++it) {
    std::unordered_set<Determinant> inside(w.dets.begin(), w.dets.end());
    std::vector<std::vector<Determinant>> picked(w.dets.size());
    parallel_for(w.dets.size(), [&](std::size_t k) {
      const double vk = std::abs(w.vector[k]);
      if (vk == 0.0) return;
      for_each_connected(w.dets[k], [&](const Determinant& e, const ExcitationInfo& info) {
        if (!inside.contains(e) && std::abs(matrix_element(w.dets[k], info, store)) * vk > delta)
          picked[k].push_back(e);
      });
    });
    std::vector<Determinant> added;
    for (auto& p : picked) added.insert(added.end(), p.begin(), p.end());
    std::sort(added.begin(), added.end());
    added.erase(std::unique(added.begin(), added.end()), added.end());
    if (added.empty()) break;
    if (added.size() > max_dim - w.dets.size()) added.resize(max_dim - w.dets.size());
    const double e_old = w.energy;
    grow(w, added, store);
    trace.push_back(row(it, w, e_old - w.energy));
    if (std::abs(e_old - w.energy) <= conv_tol) break;
  }
  return finish("hci", std::move(w), std::move(trace));
}

BaselineResult cipsi_run(const IntegralStore& store, Sector sector, std::size_t n_select, std::size_t max_dim) {
  if (n_select < 1) throw ParameterError("CIPSI needs n_select >= 1");
  Working w = start(store, sector);
  std::vector<TraceRecord> trace{row(0, w, 0.0)};
  std::size_t intruders = 0;
  for (std::uint64_t it = 1; w.dets.size() < max_dim; ++it) {
    const auto externals = external_space(w.dets, w.vector, store);
    if (externals.empty()) break;
    struct Ranked {
      Determinant det;
      double score;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(externals.size());
    for (const auto& e : externals) {
      const double den = e.diagonal - w.energy;
      if (std::abs(den) < 1e-10) {
        ++intruders;
        ranked.push_back({e.det, std::numeric_limits<double>::infinity()});
      } else {
        ranked.push_back({e.det, std::abs(e.coupling) / std::abs(den)});
      }
    }
    const std::size_t take = std::min({n_select, ranked.size(), max_dim - w.dets.size()});
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(),
                      [](const Ranked& a, const Ranked& b) {
                        return a.score != b.score ? a.score > b.score : a.det < b.det;
                      });
    std::vector<Determinant> added;
    for (std::size_t i = 0; i < take; ++i) added.push_back(ranked[i].det);
    const double e_old = w.energy;
    grow(w, added, store);
    trace.push_back(row(it, w, e_old - w.energy));
  }
  auto result = finish("cipsi", std::move(w), std::move(trace));
  result.intruders = intruders;
  return result;
}

std::optional<std::size_t> dets_to_accuracy(std::span<const TraceRecord> trace, double reference, double window) {
  for (const auto& r : trace) {
    if (r.energy_filtered - reference <= window) return r.n_dets_filtered;
    if (r.energy - reference <= window) return r.n_dets;
  }
  return std::nullopt;
}

}  // namespace qsci
