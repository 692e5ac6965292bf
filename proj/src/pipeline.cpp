#include "qsci/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>

#include <json.hpp>

#include "qsci/error.hpp"
#include "qsci/integrals.hpp"
#include "qsci/io.hpp"
#include "qsci/qubit_hamiltonian.hpp"

namespace qsci {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void RunConfig::validate() const {
  evolution.validate();
  sampler.validate();
  if (baselines.hci && !(baselines.hci_delta > 0)) throw ParameterError("HCI threshold must be positive");
  if (baselines.cipsi && baselines.cipsi_select < 1) throw ParameterError("CIPSI selection size must be >= 1");
  if (fcidump.empty()) throw ParameterError("an FCIDUMP path is required");
}

namespace {

// Energies in JSON carry the same rounding as the CSV tables they come from.
double rounded(double e) { return std::stod(format_energy(e)); }

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  const fs::path& dir() const { return dir_; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(dir_ / name);
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
    body(out);
    if (!out) throw IoError("failed writing " + (dir_ / name).string());
    files_.push_back(name);
  }
  void note(const std::string& name) { files_.push_back(name); }

  void manifest(const std::string& status) {
    std::ofstream out(dir_ / "MANIFEST");
    out << "status: " << status << '\n';
    for (const auto& f : files_) out << f << '\n';
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

class Stopwatch {
 public:
  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    laps_.emplace_back(stage, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }
  void write(std::ostream& out) const {
    out << "stage,seconds\n";
    for (const auto& [s, t] : laps_) out << s << ',' << t << '\n';
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, double>> laps_;
};

json baseline_json(const BaselineResult& r) {
  json j;
  j["energy"] = rounded(r.energy);
  j["n_dets"] = r.dets.size();
  j["iterations"] = r.trace.size();
  return j;
}

RunSummary run_stages(const RunConfig& config, const IntegralStore& store, Sector sector, Artifacts& out) {
  Stopwatch clock;
  RunSummary summary;
  summary.tag = config.fcidump.stem().string();
  const int n_orb = store.n_orb();
  const auto hf = hartree_fock(n_orb, sector);
  summary.e_hf = diagonal_element(hf, store);
  json result;
  result["fcidump"] = config.fcidump.string();
  result["n_orb"] = n_orb;
  result["sector"] = {{"n_alpha", sector.n_alpha}, {"n_beta", sector.n_beta}};
  result["sector_dimension"] = sector_dimension(n_orb, sector);
  result["seed"] = config.seed;

  // Measurements.
  std::vector<MeasurementSet> sets;
  json evo;
  if (config.measurements) {
    sets = read_measurements(*config.measurements);
    for (const auto& s : sets)
      if (s.n_qubits != 2 * n_orb) throw DimensionError("measurement width does not match 2 * NORB");
    evo["source"] = config.measurements->string();
  } else {
    const auto h = jordan_wigner(store);
    auto ec = config.evolution;
    ec.seed = config.seed;
    sets = evolve_and_measure(h, hf, ec);
    evo["source"] = "simulated";
    evo["tau"] = ec.tau;
    evo["steps"] = ec.steps;
    evo["instances"] = ec.instances;
    evo["shots_per_instance"] = ec.shots;
    if (ec.depth.samples) evo["qdrift_samples"] = *ec.depth.samples;
    if (ec.depth.epsilon) {
      evo["qdrift_epsilon"] = *ec.depth.epsilon;
      evo["qdrift_samples"] = qdrift_sample_count(l1_norm(h), ec.tau, *ec.depth.epsilon);
    }
    evo["depolarizing"] = ec.depolarizing;
    evo["pauli_terms"] = h.terms().size();
    evo["lambda"] = l1_norm(h);
  }
  write_measurements(out.dir() / "measurements", sets);
  for (std::size_t k = 0; k < sets.size(); ++k) out.note("measurements/step_" + std::to_string(k + 1) + ".txt");
  json steps = json::array();
  for (const auto& s : sets) {
    const auto valid = std::count_if(s.shots.begin(), s.shots.end(), [&](const std::string& b) {
      return from_bitstring(b, n_orb).sector() == sector;
    });
    steps.push_back({{"time", s.time},
                     {"shots", s.shots.size()},
                     {"valid_fraction", static_cast<double>(valid) / static_cast<double>(s.shots.size())}});
  }
  evo["sets"] = steps;
  result["evolution"] = evo;
  clock.lap("evolution");

  // Sampling, with a PT2 snapshot at the end of every outer iteration.
  auto sc = config.sampler;
  sc.seed = config.seed;
  std::vector<Pt2Snapshot> snapshots;
  std::optional<SubspaceState> resume;
  if (config.resume) {
    auto ck = read_checkpoint(*config.resume, store);
    if (ck.seed != config.seed) throw InputError("checkpoint was written with a different seed");
    snapshots = std::move(ck.snapshots);
    resume = std::move(ck.state);
  }
  auto snapshot = [&](const SubspaceState& s) {
    const auto p = epstein_nesbet_pt2(s.dets, s.vector, s.energy, store);
    return Pt2Snapshot{s.counter, s.dets.size(), s.energy, p.correction, p.n_intruders};
  };
  QsciHooks hooks;
  hooks.after_round = [&](const SubspaceState& s) {
    if (config.pt2 && s.next_round == 0) snapshots.push_back(snapshot(s));
    if (config.checkpoint) write_checkpoint(*config.checkpoint, {config.seed, s, snapshots});
  };
  summary.state = run_qsci(sets, sc, store, sector, hooks, std::move(resume));
  const auto& state = summary.state;
  summary.e_qsci = state.energy;
  summary.n_dets = state.dets.size();
  clock.lap("sampling");

  json q;
  q["energy"] = rounded(state.energy);
  q["n_dets"] = state.dets.size();
  q["outer_iterations"] = state.counter;
  q["rounds"] = state.trace.size();
  q["config"] = {{"dmax", sc.max_dets},     {"rounds", sc.rounds}, {"samples", sc.samples},
                 {"eps_screen", sc.eps_screen}, {"eps_wf", sc.eps_wf},  {"conv_tol", sc.conv_tol},
                 {"pool_steps", sc.pool_steps}};
  out.write("trace.csv", [&](std::ostream& o) { write_trace_csv(o, "qsci", state.trace); });
  out.write("wavefunction.txt", [&](std::ostream& o) { write_wavefunction(o, state.dets, state.vector); });

  if (config.pt2) {
    const auto p = epstein_nesbet_pt2(state.dets, state.vector, state.energy, store);
    summary.pt2 = p;
    if (snapshots.empty() || snapshots.back().n_dets != state.dets.size() || snapshots.back().energy != state.energy)
      snapshots.push_back({state.counter, state.dets.size(), state.energy, p.correction, p.n_intruders});
    q["eps_pt2"] = rounded(p.correction);
    q["energy_pt2"] = rounded(state.energy + p.correction);
    q["n_external"] = p.n_external;
    q["n_intruders"] = p.n_intruders;
    summary.snapshots = snapshots;
    out.write("pt2.csv", [&](std::ostream& o) { write_snapshots_csv(o, snapshots); });
    std::vector<std::pair<double, double>> points;
    for (const auto& s : snapshots) points.emplace_back(s.correction, s.energy);
    try {
      summary.extrapolation = extrapolate_pt2(points);
      q["extrapolation"] = {{"intercept", rounded(summary.extrapolation->intercept)},
                            {"slope", summary.extrapolation->slope},
                            {"r2", summary.extrapolation->r2},
                            {"points", summary.extrapolation->points}};
    } catch (const SingularFitError&) {
      q["extrapolation"] = nullptr;
    }
    clock.lap("pt2");
  }
  result["qsci"] = q;
  result["hartree_fock"] = rounded(summary.e_hf);

  // Baselines.
  json base = json::object();
  std::vector<std::pair<std::string, std::vector<TraceRecord>>> traces{{"qsci", state.trace}};
  const auto& bt = config.baselines;
  if (bt.fci) {
    if (sector_dimension(n_orb, sector) <= kFciDimensionCap) {
      const auto r = fci_solve(store, sector);
      summary.e_fci = r.energy;
      base["fci"] = baseline_json(r);
      out.write("fci_trace.csv", [&](std::ostream& o) { write_trace_csv(o, "fci", r.trace); });
    } else {
      base["fci"] = {{"skipped", "sector exceeds the FCI cap"}};
    }
    clock.lap("fci");
  }
  if (bt.hci) {
    const auto r = hci_run(store, sector, bt.hci_delta, 1e-8, bt.max_dets);
    summary.e_hci = r.energy;
    base["hci"] = baseline_json(r);
    base["hci"]["delta"] = bt.hci_delta;
    traces.emplace_back("hci", r.trace);
    out.write("hci_trace.csv", [&](std::ostream& o) { write_trace_csv(o, "hci", r.trace); });
    clock.lap("hci");
  }
  if (bt.cipsi) {
    const auto r = cipsi_run(store, sector, bt.cipsi_select, bt.max_dets);
    summary.e_cipsi = r.energy;
    base["cipsi"] = baseline_json(r);
    base["cipsi"]["n_select"] = bt.cipsi_select;
    base["cipsi"]["intruders"] = r.intruders;
    base["cipsi"]["criterion"] = "CIPSI-style |<l|H|Psi>|/(H_ll-E) ranking";
    traces.emplace_back("cipsi", r.trace);
    out.write("cipsi_trace.csv", [&](std::ostream& o) { write_trace_csv(o, "cipsi", r.trace); });
    clock.lap("cipsi");
  }
  result["baselines"] = base;
  if (summary.e_fci) {
    out.write("compactness.csv", [&](std::ostream& o) {
      o << "method,n_dets_at_1mHa,final_n_dets,final_energy\n";
      for (const auto& [m, t] : traces) {
        const auto n = dets_to_accuracy(t, *summary.e_fci);
        o << m << ',' << (n ? std::to_string(*n) : "") << ',' << t.back().n_dets_filtered << ','
          << format_energy(t.back().energy_filtered) << '\n';
      }
    });
  }
  out.write("result.json", [&](std::ostream& o) { o << result.dump(2) << '\n'; });
  out.write("timings.csv", [&](std::ostream& o) { clock.write(o); });
  return summary;
}

}  // namespace

RunSummary run_pipeline(const RunConfig& config) {
  config.validate();
  const auto store = read_fcidump(config.fcidump.string());
  const Sector sector = config.sector.value_or(store.sector());
  if (sector.n_alpha < 0 || sector.n_beta < 0 || sector.n_alpha > store.n_orb() || sector.n_beta > store.n_orb())
    throw ParameterError("sector does not fit the orbital count");
  fs::create_directories(config.output_dir);
  Artifacts out(config.output_dir);
  try {
    auto summary = run_stages(config, store, sector, out);
    out.manifest("complete");
    return summary;
  } catch (const std::exception& e) {
    json err{{"error", error_kind(e)}, {"message", e.what()}, {"exit_code", exit_code(e)}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) err["line"] = pe->line();
    std::ofstream(config.output_dir / "error.json") << err.dump(2) << '\n';
    out.note("error.json");
    out.manifest("incomplete");
    throw;
  }
}

std::vector<std::optional<RunSummary>> pec_scan(const RunConfig& base, const std::vector<fs::path>& points) {
  if (points.empty()) throw InputError("PEC scan needs at least one geometry");
  fs::create_directories(base.output_dir);
  std::vector<std::optional<RunSummary>> results;
  json failures = json::array();
  for (std::size_t k = 0; k < points.size(); ++k) {
    RunConfig c = base;
    c.fcidump = points[k];
    c.output_dir = base.output_dir / ("point_" + std::to_string(k + 1) + "_" + points[k].stem().string());
    c.checkpoint.reset();
    c.resume.reset();
    try {
      results.emplace_back(run_pipeline(c));
    } catch (const std::exception& e) {
      failures.push_back({{"point", points[k].string()}, {"error", error_kind(e)}, {"message", e.what()}});
      results.emplace_back(std::nullopt);
    }
  }

  const bool extrap = points.size() > 1;
  auto cell = [](const std::optional<double>& x) { return x ? format_energy(*x) : std::string(); };
  std::ofstream out(base.output_dir / "curve.csv");
  if (!out) throw IoError("cannot write " + (base.output_dir / "curve.csv").string());
  out << "geometry,E_HF,E_QSCI,eps_pt2,E_QSCI_PT2" << (extrap ? ",E_extrap" : "") << ",E_FCI,E_HCI,E_CIPSI,n_dets\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    out << points[k].stem().string();
    const auto& r = results[k];
    if (!r) {
      out << ",,,," << (extrap ? "," : "") << ",,,\n";
      continue;
    }
    out << ',' << format_energy(r->e_hf) << ',' << format_energy(r->e_qsci);
    if (r->pt2)
      out << ',' << format_energy(r->pt2->correction) << ',' << format_energy(r->e_qsci + r->pt2->correction);
    else
      out << ",,";
    if (extrap) out << ',' << (r->extrapolation ? format_energy(r->extrapolation->intercept) : std::string());
    out << ',' << cell(r->e_fci) << ',' << cell(r->e_hci) << ',' << cell(r->e_cipsi) << ',' << r->n_dets << '\n';
  }
  if (!failures.empty()) std::ofstream(base.output_dir / "failures.json") << failures.dump(2) << '\n';
  return results;
}

}  // namespace qsci
