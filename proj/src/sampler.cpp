#include "qsci/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qsci/error.hpp"
#include "qsci/parallel.hpp"

namespace qsci {

OccupancyDistribution occupancy_distribution(const MeasurementSet& set, int n_orb) {
  if (set.shots.empty()) throw InputError("occupancy of an empty measurement set");
  const auto width = static_cast<std::size_t>(2 * n_orb);
  std::vector<std::size_t> counts(width, 0);
  for (const auto& s : set.shots) {
    if (s.size() != width)
      throw FormatError("shot of length " + std::to_string(s.size()) + ", expected " + std::to_string(width));
    for (std::size_t q = 0; q < width; ++q) counts[q] += s[q] == '1';
  }
  OccupancyDistribution occ;
  const double n = static_cast<double>(set.shots.size());
  for (int i = 0; i < n_orb; ++i) {
    occ.alpha.push_back(static_cast<double>(counts[static_cast<std::size_t>(i)]) / n);
    occ.beta.push_back(static_cast<double>(counts[static_cast<std::size_t>(n_orb + i)]) / n);
  }
  return occ;
}

std::vector<Determinant> harvest_valid(const MeasurementSet& set, int n_orb, Sector sector) {
  std::unordered_map<Determinant, std::size_t> counts;
  for (const auto& s : set.shots) {
    const auto d = from_bitstring(s, n_orb);
    if (d.sector() == sector) ++counts[d];
  }
  std::vector<std::pair<Determinant, std::size_t>> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<Determinant> out;
  out.reserve(sorted.size());
  for (const auto& [d, c] : sorted) out.push_back(d);
  return out;
}

MeasurementSet pool_measurements(std::span<const MeasurementSet> sets) {
  if (sets.empty()) throw InputError("no measurement sets to pool");
  MeasurementSet out{sets.front().time, sets.front().n_qubits, {}};
  for (const auto& s : sets) {
    if (s.n_qubits != out.n_qubits) throw DimensionError("measurement sets differ in qubit count");
    out.shots.insert(out.shots.end(), s.shots.begin(), s.shots.end());
  }
  return out;
}

namespace {

// Weighted choice over `indices` with weights taken from `weight(i)`,
// renormalized over the set (uniform if all weights vanish).
struct IndexDistribution {
  std::vector<int> indices;
  std::vector<double> probs;

  IndexDistribution(std::vector<int> idx, const std::function<double(int)>& weight)
      : indices(std::move(idx)) {
    double total = 0.0;
    for (int i : indices) {
      probs.push_back(std::max(weight(i), 0.0));
      total += probs.back();
    }
    if (total > 0.0) {
      for (auto& p : probs) p /= total;
    } else {
      for (auto& p : probs) p = 1.0 / static_cast<double>(probs.size());
    }
  }

  // Draw excluding position `skip` (renormalized); returns the position.
  std::size_t draw(Rng& rng, std::size_t skip = static_cast<std::size_t>(-1)) const {
    double total = 0.0;
    std::size_t eligible = 0;
    for (std::size_t k = 0; k < probs.size(); ++k)
      if (k != skip) {
        total += probs[k];
        ++eligible;
      }
    const bool uniform = !(total > 0.0);
    const double u = rng.uniform() * (uniform ? static_cast<double>(eligible) : total);
    double run = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (k == skip) continue;
      run += uniform ? 1.0 : probs[k];
      last = k;
      if (u < run) return k;
    }
    return last;
  }
};

}  // namespace

std::vector<Candidate> propose_candidates(const Determinant& parent, const OccupancyDistribution& occ,
                                          Rng& rng) {
  if (occ.alpha.size() != static_cast<std::size_t>(parent.n_orb) ||
      occ.beta.size() != static_cast<std::size_t>(parent.n_orb))
    throw DimensionError("occupancy distribution does not match the orbital count");
  const Mask full = low_bits(parent.n_orb);
  auto holes_of = [&](Spin s) {
    const auto& f = occ.channel(s);
    return IndexDistribution(occupied_list(parent.mask(s)),
                             [&f](int i) { return f[static_cast<std::size_t>(i)]; });
  };
  auto particles_of = [&](Spin s) {
    const auto& f = occ.channel(s);
    return IndexDistribution(occupied_list(full & ~parent.mask(s)),
                             [&f](int i) { return 1.0 - f[static_cast<std::size_t>(i)]; });
  };
  const IndexDistribution holes[2] = {holes_of(Spin::alpha), holes_of(Spin::beta)};
  const IndexDistribution parts[2] = {particles_of(Spin::alpha), particles_of(Spin::beta)};

  std::vector<Candidate> out;
  out.reserve(5);
  for (Spin s : {Spin::alpha, Spin::beta}) {
    const auto& h = holes[static_cast<int>(s)];
    const auto& p = parts[static_cast<int>(s)];
    if (!h.indices.empty() && !p.indices.empty()) {
      const auto i = h.draw(rng);
      const auto a = p.draw(rng);
      const SpinOrbital hs[] = {{s, h.indices[i]}};
      const SpinOrbital ps[] = {{s, p.indices[a]}};
      out.push_back({apply_excitation(parent, hs, ps).first, h.probs[i] * p.probs[a], ExcitationKind::single});
    }
    if (h.indices.size() >= 2 && p.indices.size() >= 2) {
      const auto i = h.draw(rng);
      const auto j = h.draw(rng, i);
      const auto a = p.draw(rng);
      const auto b = p.draw(rng, a);
      const SpinOrbital hs[] = {{s, h.indices[i]}, {s, h.indices[j]}};
      const SpinOrbital ps[] = {{s, p.indices[a]}, {s, p.indices[b]}};
      out.push_back({apply_excitation(parent, hs, ps).first,
                     h.probs[i] * h.probs[j] * p.probs[a] * p.probs[b], ExcitationKind::same_spin_double});
    }
  }
  const auto& ha = holes[0];
  const auto& hb = holes[1];
  const auto& pa = parts[0];
  const auto& pb = parts[1];
  if (!ha.indices.empty() && !hb.indices.empty() && !pa.indices.empty() && !pb.indices.empty()) {
    const auto i = ha.draw(rng);
    const auto j = hb.draw(rng);
    const auto a = pa.draw(rng);
    const auto b = pb.draw(rng);
    const SpinOrbital hs[] = {{Spin::alpha, ha.indices[i]}, {Spin::beta, hb.indices[j]}};
    const SpinOrbital ps[] = {{Spin::alpha, pa.indices[a]}, {Spin::beta, pb.indices[b]}};
    out.push_back({apply_excitation(parent, hs, ps).first,
                   ha.probs[i] * hb.probs[j] * pa.probs[a] * pb.probs[b], ExcitationKind::opposite_spin_double});
  }
  return out;
}

std::vector<ScoredCandidate> screen_candidates(std::span<const Candidate> candidates,
                                               const Determinant& parent, const IntegralStore& store,
                                               std::size_t keep) {
  std::unordered_map<Determinant, double> best;
  for (const auto& c : candidates) {
    const double d = c.probability * std::abs(matrix_element(parent, c.det, store));
    auto [it, inserted] = best.emplace(c.det, d);
    if (!inserted) it->second = std::max(it->second, d);
  }
  std::vector<ScoredCandidate> ranked;
  ranked.reserve(best.size());
  for (const auto& [det, score] : best) ranked.push_back({det, score});
  std::sort(ranked.begin(), ranked.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    return a.score != b.score ? a.score > b.score : a.det < b.det;
  });
  if (ranked.size() > keep) ranked.resize(keep);
  return ranked;
}

void SamplerConfig::validate() const {
  if (max_dets < 1) throw ParameterError("D_max must be >= 1");
  if (rounds < 1) throw ParameterError("N_rounds must be >= 1");
  if (samples < 1) throw ParameterError("N_samples must be >= 1");
  if (!(eps_screen > 0) || !(eps_wf > 0) || !(conv_tol > 0))
    throw ParameterError("screening, wavefunction and convergence thresholds must be positive");
  if (!(eps_wf < eps_screen)) throw ParameterError("eps_wf must be smaller than eps_screen");
}

void SubspaceState::reindex() {
  index.clear();
  index.reserve(dets.size());
  for (std::size_t k = 0; k < dets.size(); ++k)
    if (!index.emplace(dets[k], k).second) throw InputError("duplicate determinant in subspace");
}

SubspaceState initial_state(const Determinant& reference, const IntegralStore& store) {
  SubspaceState state;
  state.dets = {reference};
  state.matrix = build_interaction_matrix(state.dets, store);
  state.energy = state.matrix.diagonal(0);
  state.vector = {1.0};
  state.reindex();
  return state;
}

void rebuild(SubspaceState& state, const IntegralStore& store) {
  state.reindex();
  state.matrix = build_interaction_matrix(state.dets, store);
  if (state.vector.size() != state.dets.size()) throw DimensionError("vector and subspace sizes differ");
}

std::size_t insert_determinants(SubspaceState& state, std::span<const Determinant> dets,
                                const IntegralStore& store, std::size_t cap) {
  const Sector sector = state.dets.front().sector();
  std::vector<Determinant> added;
  for (const auto& d : dets) {
    if (state.dets.size() + added.size() >= cap) break;
    if (d.sector() != sector) throw InputError("determinant outside the working sector");
    if (state.contains(d) || std::find(added.begin(), added.end(), d) != added.end()) continue;
    added.push_back(d);
  }
  if (added.empty()) return 0;
  state.matrix = extend_interaction_matrix(state.matrix, state.dets, added, store);
  for (const auto& d : added) {
    state.index.emplace(d, state.dets.size());
    state.dets.push_back(d);
  }
  state.vector.resize(state.dets.size(), 0.0);
  state.needs_solve = true;
  return added.size();
}

namespace {

void solve(SubspaceState& state, const SamplerConfig& config) {
  auto r = davidson_lowest(state.matrix, state.vector, config.solver);
  state.energy = r.energy;
  state.vector = std::move(r.vector);
}

}  // namespace

void expand_round(SubspaceState& state, const OccupancyDistribution& occ, const SamplerConfig& config,
                  const IntegralStore& store) {
  std::vector<std::size_t> parents;
  for (std::size_t k = 0; k < state.dets.size(); ++k)
    if (std::abs(state.vector[k]) > config.eps_screen) parents.push_back(k);

  std::vector<std::vector<ScoredCandidate>> selected(parents.size());
  parallel_for(parents.size(), [&](std::size_t n) {
    const std::size_t k = parents[n];
    Rng rng(derive_seed(config.seed, Stream::sampler_proposals,
                        {state.counter, static_cast<std::uint64_t>(state.next_round), k}));
    std::vector<Candidate> pool;
    pool.reserve(5 * static_cast<std::size_t>(config.samples));
    for (int s = 0; s < config.samples; ++s) {
      auto c = propose_candidates(state.dets[k], occ, rng);
      pool.insert(pool.end(), c.begin(), c.end());
    }
    selected[n] = screen_candidates(pool, state.dets[k], store, static_cast<std::size_t>(config.samples));
  });

  // Union over parents, keeping the best score of each new determinant.
  std::unordered_map<Determinant, double> fresh;
  for (const auto& list : selected)
    for (const auto& c : list) {
      if (state.contains(c.det)) continue;
      auto [it, inserted] = fresh.emplace(c.det, c.score);
      if (!inserted) it->second = std::max(it->second, c.score);
    }
  std::vector<ScoredCandidate> ranked;
  ranked.reserve(fresh.size());
  for (const auto& [d, s] : fresh) ranked.push_back({d, s});
  std::sort(ranked.begin(), ranked.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    return a.score != b.score ? a.score > b.score : a.det < b.det;
  });
  const std::size_t room = config.max_dets > state.dets.size() ? config.max_dets - state.dets.size() : 0;
  if (ranked.size() > room) ranked.resize(room);

  if (ranked.empty() && !state.needs_solve) {
    state.delta = 0.0;
    state.trace.push_back({state.counter, state.next_round, state.dets.size(), state.energy, 0.0,
                           state.dets.size(), state.energy});
    return;
  }

  std::vector<Determinant> added;
  added.reserve(ranked.size());
  for (const auto& c : ranked) added.push_back(c.det);
  insert_determinants(state, added, store, config.max_dets);

  const double e_old = state.energy;
  solve(state, config);
  state.needs_solve = false;
  state.delta = e_old - state.energy;
  TraceRecord rec{state.counter, state.next_round, state.dets.size(), state.energy, state.delta, 0, 0.0};

  std::vector<std::size_t> keep;
  keep.reserve(state.dets.size());
  for (std::size_t k = 0; k < state.dets.size(); ++k)
    if (k == 0 || std::abs(state.vector[k]) > config.eps_wf) keep.push_back(k);
  if (keep.size() < state.dets.size()) {
    std::vector<Determinant> dets;
    std::vector<double> vec;
    dets.reserve(keep.size());
    vec.reserve(keep.size());
    for (auto k : keep) {
      dets.push_back(state.dets[k]);
      vec.push_back(state.vector[k]);
    }
    double nrm = 0.0;
    for (double x : vec) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : vec) x /= nrm;
    state.matrix = state.matrix.restricted(keep);
    state.dets = std::move(dets);
    state.vector = std::move(vec);
    state.reindex();
    solve(state, config);
  }
  rec.n_dets_filtered = state.dets.size();
  rec.energy_filtered = state.energy;
  state.trace.push_back(rec);
}

SubspaceState run_qsci(std::span<const MeasurementSet> sets, const SamplerConfig& config,
                       const IntegralStore& store, Sector sector, const QsciHooks& hooks,
                       std::optional<SubspaceState> resume) {
  config.validate();
  if (sets.empty()) throw InputError("run_qsci needs at least one measurement set");
  const int n_orb = store.n_orb();
  std::vector<MeasurementSet> pooled;
  if (config.pool_steps) {
    pooled.push_back(pool_measurements(sets));
    sets = pooled;
  }

  SubspaceState state = resume ? std::move(*resume) : initial_state(hartree_fock(n_orb, sector), store);
  if (state.dets.empty() || state.dets.front().sector() != sector)
    throw InputError("subspace reference is not in the requested sector");

  while (state.next_round != 0 || (state.dets.size() < config.max_dets && config.conv_tol < state.delta)) {
    const auto& set = sets[state.counter % sets.size()];
    if (state.next_round == 0) insert_determinants(state, harvest_valid(set, n_orb, sector), store, config.max_dets);
    const auto occ = occupancy_distribution(set, n_orb);
    while (true) {
      expand_round(state, occ, config, store);
      if (++state.next_round == config.rounds) {
        state.next_round = 0;
        ++state.counter;
      }
      if (hooks.after_round) hooks.after_round(state);
      if (state.next_round == 0) break;
    }
  }
  return state;
}

}  // namespace qsci
