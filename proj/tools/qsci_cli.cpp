#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsci/baselines.hpp"
#include "qsci/eigensolver.hpp"
#include "qsci/error.hpp"
#include "qsci/integrals.hpp"
#include "qsci/io.hpp"
#include "qsci/pipeline.hpp"
#include "qsci/pt2.hpp"
#include "qsci/qubit_hamiltonian.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qsci;

namespace {

struct Options {
  std::string fcidump;
  std::vector<std::string> fcidumps;
  std::optional<int> n_alpha, n_beta;
  RunConfig run;
  std::optional<std::size_t> qdrift_n;
  std::optional<double> qdrift_eps;
  std::string out = "qsci_out";
  std::optional<std::string> measurements, checkpoint, resume;
  bool no_fci = false, no_pt2 = false, pt2 = false, fci = false;
  double conv = 1e-8;
  std::size_t max_dets = 50000;
  std::string wavefunction;
  std::vector<std::string> inputs;
};

void add_system(CLI::App* sub, Options& o) {
  sub->add_option("--fcidump", o.fcidump, "FCIDUMP integral file")->required();
  sub->add_option("--n-alpha", o.n_alpha, "alpha electrons (default from NELEC/MS2)");
  sub->add_option("--n-beta", o.n_beta, "beta electrons (default from NELEC/MS2)");
}

void add_evolution(CLI::App* sub, Options& o) {
  auto& e = o.run.evolution;
  sub->add_option("--tau", e.tau, "time step")->capture_default_str();
  sub->add_option("--steps", e.steps, "number of time steps")->capture_default_str();
  sub->add_option("--instances", e.instances, "qDRIFT circuits per step")->capture_default_str();
  sub->add_option("--shots", e.shots, "shots per circuit")->capture_default_str();
  auto* n = sub->add_option("--qdrift-n", o.qdrift_n, "qDRIFT rotations per circuit (default 200)");
  sub->add_option("--qdrift-eps", o.qdrift_eps, "qDRIFT channel precision; sets N = ceil(2 lambda^2 t^2 / eps)")
      ->excludes(n);
  sub->add_option("--p-dep", e.depolarizing, "depolarizing probability per shot")->capture_default_str();
  sub->add_option("--seed", o.run.seed, "master seed")->capture_default_str();
}

void add_sampler(CLI::App* sub, Options& o) {
  auto& s = o.run.sampler;
  sub->add_option("--dmax", s.max_dets, "subspace size limit")->capture_default_str();
  sub->add_option("--rounds", s.rounds, "sampling rounds per outer iteration")->capture_default_str();
  sub->add_option("--samples", s.samples, "proposals per parent per round")->capture_default_str();
  sub->add_option("--eps-screen", s.eps_screen, "parent amplitude threshold")->capture_default_str();
  sub->add_option("--eps-wf", s.eps_wf, "amplitude filter threshold")->capture_default_str();
  sub->add_option("--conv-tol", s.conv_tol, "outer-iteration energy convergence")->capture_default_str();
  sub->add_flag("--pool-steps", s.pool_steps, "pool every time step into one measurement set");
  sub->add_option("--measurements", o.measurements, "read measurements (file or directory) instead of simulating");
  sub->add_option("--checkpoint", o.checkpoint, "checkpoint file rewritten after every round");
  sub->add_option("--resume", o.resume, "continue from a checkpoint");
  sub->add_option("--out", o.out, "output directory")->capture_default_str();
}

void add_baselines(CLI::App* sub, Options& o) {
  auto& b = o.run.baselines;
  sub->add_flag("--hci", b.hci, "run heat-bath CI");
  sub->add_option("--hci-delta", b.hci_delta, "HCI threshold")->capture_default_str();
  sub->add_flag("--cipsi", b.cipsi, "run CIPSI-style selection");
  sub->add_option("--cipsi-select", b.cipsi_select, "determinants added per CIPSI iteration")->capture_default_str();
  sub->add_option("--baseline-max-dets", b.max_dets, "HCI/CIPSI size cap")->capture_default_str();
}

std::optional<Sector> requested_sector(const Options& o, const IntegralStore* store = nullptr) {
  if (!o.n_alpha && !o.n_beta) return std::nullopt;
  if (o.n_alpha && o.n_beta) return Sector{*o.n_alpha, *o.n_beta};
  if (!store) throw ParameterError("give both --n-alpha and --n-beta");
  const int na = o.n_alpha ? *o.n_alpha : store->n_elec() - *o.n_beta;
  return Sector{na, store->n_elec() - na};
}

Sector sector_of(const Options& o, const IntegralStore& store) {
  return requested_sector(o, &store).value_or(store.sector());
}

RunConfig finish(Options& o) {
  RunConfig c = o.run;
  c.fcidump = o.fcidump;
  c.sector = requested_sector(o);
  if (o.qdrift_eps) c.evolution.depth = QDriftDepth::from_epsilon(*o.qdrift_eps);
  if (o.qdrift_n) c.evolution.depth = QDriftDepth::from_samples(*o.qdrift_n);
  c.output_dir = o.out;
  if (o.measurements) c.measurements = *o.measurements;
  if (o.checkpoint) c.checkpoint = *o.checkpoint;
  if (o.resume) c.resume = *o.resume;
  return c;
}

json baseline_summary(const BaselineResult& r) {
  json j{{"method", r.method}, {"energy", std::stod(format_energy(r.energy))}, {"n_dets", r.dets.size()},
         {"iterations", r.trace.size()}};
  if (r.method == "cipsi") j["intruders"] = r.intruders;
  return j;
}

void maybe_write_trace(const Options& o, const BaselineResult& r, bool requested) {
  if (!requested) return;
  fs::create_directories(o.out);
  std::ofstream out(fs::path(o.out) / (r.method + "_trace.csv"));
  if (!out) throw IoError("cannot write into " + o.out);
  write_trace_csv(out, r.method, r.trace);
}

json summary_json(const RunSummary& s, const fs::path& dir) {
  json j{{"output", dir.string()}, {"hartree_fock", std::stod(format_energy(s.e_hf))},
         {"qsci", std::stod(format_energy(s.e_qsci))}, {"n_dets", s.n_dets}};
  if (s.pt2) {
    j["eps_pt2"] = std::stod(format_energy(s.pt2->correction));
    j["qsci_pt2"] = std::stod(format_energy(s.e_qsci + s.pt2->correction));
  }
  if (s.extrapolation) j["extrapolated"] = std::stod(format_energy(s.extrapolation->intercept));
  if (s.e_fci) j["fci"] = std::stod(format_energy(*s.e_fci));
  if (s.e_hci) j["hci"] = std::stod(format_energy(*s.e_hci));
  if (s.e_cipsi) j["cipsi"] = std::stod(format_energy(*s.e_cipsi));
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-selected configuration interaction from simulated time-evolution measurements"};
  app.set_config("--config", "", "configuration file given before the subcommand; keys under [<subcommand>] or prefixed <subcommand>., command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  Options o;

  auto* info = app.add_subcommand("fcidump-info", "summarize an FCIDUMP");
  add_system(info, o);

  auto* fci = app.add_subcommand("fci", "exact diagonalization of the sector");
  add_system(fci, o);
  bool write_trace = false;
  fci->add_option("--out", o.out, "directory for the trace CSV");
  fci->callback([&] { write_trace = fci->count("--out") > 0; });

  auto* hci = app.add_subcommand("hci", "heat-bath selected CI");
  add_system(hci, o);
  hci->add_option("--delta", o.run.baselines.hci_delta, "selection threshold")->capture_default_str();
  hci->add_option("--conv", o.conv, "energy convergence")->capture_default_str();
  hci->add_option("--max-dets", o.max_dets, "size cap")->capture_default_str();
  hci->add_option("--out", o.out, "directory for the trace CSV");
  hci->callback([&] { write_trace = hci->count("--out") > 0; });

  auto* cipsi = app.add_subcommand("cipsi", "CIPSI-style perturbative selection");
  add_system(cipsi, o);
  cipsi->add_option("--n-select", o.run.baselines.cipsi_select, "determinants added per iteration")
      ->capture_default_str();
  cipsi->add_option("--max-dets", o.max_dets, "size cap")->capture_default_str();
  cipsi->add_option("--out", o.out, "directory for the trace CSV");
  cipsi->callback([&] { write_trace = cipsi->count("--out") > 0; });

  auto* evolve = app.add_subcommand("evolve", "simulate qDRIFT evolution and write measurement files");
  add_system(evolve, o);
  add_evolution(evolve, o);
  evolve->add_option("--out", o.out, "output directory (measurements/ is created inside)")->capture_default_str();

  auto* qsci_cmd = app.add_subcommand("qsci", "configuration sampling from measurements or a fresh simulation");
  add_system(qsci_cmd, o);
  add_evolution(qsci_cmd, o);
  add_sampler(qsci_cmd, o);
  qsci_cmd->add_flag("--pt2", o.pt2, "also compute the PT2 correction and extrapolation");
  qsci_cmd->add_flag("--fci", o.fci, "also solve FCI for reference");

  auto* run = app.add_subcommand("run", "full pipeline: evolution, sampling, PT2 and baselines");
  add_system(run, o);
  add_evolution(run, o);
  add_sampler(run, o);
  add_baselines(run, o);
  run->add_flag("--no-fci", o.no_fci, "skip the FCI reference");
  run->add_flag("--no-pt2", o.no_pt2, "skip PT2");

  auto* pt2 = app.add_subcommand("pt2", "Epstein-Nesbet PT2 for a saved wavefunction");
  add_system(pt2, o);
  pt2->add_option("--wavefunction", o.wavefunction, "file of '<bitstring> <amplitude>' lines")->required();

  auto* extrap = app.add_subcommand("extrapolate", "linear fit of energy against PT2, evaluated at zero PT2");
  extrap->add_option("--input", o.inputs, "CSV files with eps_pt2 and energy columns")->required();

  auto* pec = app.add_subcommand("pec", "pipeline over several geometries and a combined curve");
  pec->add_option("--fcidump", o.fcidumps, "FCIDUMP per geometry, in curve order")->required();
  pec->add_option("--n-alpha", o.n_alpha, "alpha electrons");
  pec->add_option("--n-beta", o.n_beta, "beta electrons");
  add_evolution(pec, o);
  add_sampler(pec, o);
  add_baselines(pec, o);
  pec->add_flag("--no-fci", o.no_fci, "skip the FCI reference");
  pec->add_flag("--no-pt2", o.no_pt2, "skip PT2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*info) {
      const auto store = read_fcidump(o.fcidump);
      const auto sector = sector_of(o, store);
      const auto h = jordan_wigner(store);
      const auto hf = hartree_fock(store.n_orb(), sector);
      json j{{"n_orb", store.n_orb()},
             {"n_elec", store.n_elec()},
             {"ms2", store.ms2()},
             {"n_qubits", 2 * store.n_orb()},
             {"sector", {{"n_alpha", sector.n_alpha}, {"n_beta", sector.n_beta}}},
             {"sector_dimension", sector_dimension(store.n_orb(), sector)},
             {"core_energy", store.core_energy()},
             {"hartree_fock", std::stod(format_energy(diagonal_element(hf, store)))},
             {"pauli_terms", h.terms().size()},
             {"lambda", l1_norm(h)}};
      std::cout << j.dump(2) << '\n';
    } else if (*fci) {
      const auto store = read_fcidump(o.fcidump);
      const auto r = fci_solve(store, sector_of(o, store));
      maybe_write_trace(o, r, write_trace);
      std::cout << baseline_summary(r).dump(2) << '\n';
    } else if (*hci) {
      const auto store = read_fcidump(o.fcidump);
      const auto r = hci_run(store, sector_of(o, store), o.run.baselines.hci_delta, o.conv, o.max_dets);
      maybe_write_trace(o, r, write_trace);
      std::cout << baseline_summary(r).dump(2) << '\n';
    } else if (*cipsi) {
      const auto store = read_fcidump(o.fcidump);
      const auto r = cipsi_run(store, sector_of(o, store), o.run.baselines.cipsi_select, o.max_dets);
      maybe_write_trace(o, r, write_trace);
      std::cout << baseline_summary(r).dump(2) << '\n';
    } else if (*evolve) {
      auto c = finish(o);
      c.evolution.seed = c.seed;
      c.evolution.validate();
      const auto store = read_fcidump(o.fcidump);
      const auto sector = sector_of(o, store);
      const auto h = jordan_wigner(store);
      const auto sets = evolve_and_measure(h, hartree_fock(store.n_orb(), sector), c.evolution);
      write_measurements(fs::path(o.out) / "measurements", sets);
      json steps = json::array();
      for (const auto& s : sets) {
        std::size_t valid = 0;
        for (const auto& b : s.shots) valid += from_bitstring(b, store.n_orb()).sector() == sector;
        steps.push_back({{"time", s.time}, {"shots", s.shots.size()}, {"valid", valid}});
      }
      std::cout << json{{"output", (fs::path(o.out) / "measurements").string()}, {"sets", steps}}.dump(2) << '\n';
    } else if (*qsci_cmd) {
      auto c = finish(o);
      c.pt2 = o.pt2;
      c.baselines.fci = o.fci;
      std::cout << summary_json(run_pipeline(c), c.output_dir).dump(2) << '\n';
    } else if (*run) {
      auto c = finish(o);
      c.pt2 = !o.no_pt2;
      c.baselines.fci = !o.no_fci;
      std::cout << summary_json(run_pipeline(c), c.output_dir).dump(2) << '\n';
    } else if (*pt2) {
      const auto store = read_fcidump(o.fcidump);
      std::ifstream in(o.wavefunction);
      if (!in) throw IoError("cannot read " + o.wavefunction);
      const auto [dets, amps] = read_wavefunction(in, store.n_orb());
      const auto matrix = build_interaction_matrix(dets, store);
      const auto eig = davidson_lowest(matrix, amps);
      const auto p = epstein_nesbet_pt2(dets, eig.vector, eig.energy, store);
      json j{{"n_dets", dets.size()},
             {"energy", std::stod(format_energy(eig.energy))},
             {"eps_pt2", std::stod(format_energy(p.correction))},
             {"energy_pt2", std::stod(format_energy(eig.energy + p.correction))},
             {"n_external", p.n_external},
             {"n_intruders", p.n_intruders}};
      std::cout << j.dump(2) << '\n';
    } else if (*extrap) {
      std::vector<std::pair<double, double>> points;
      for (const auto& path : o.inputs) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read " + path);
        const auto p = read_pt2_points(in);
        points.insert(points.end(), p.begin(), p.end());
      }
      const auto r = extrapolate_pt2(points);
      json j{{"intercept", r.intercept}, {"slope", r.slope}, {"r2", r.r2}, {"points", r.points}};
      std::cout << j.dump(2) << '\n';
    } else if (*pec) {
      o.fcidump = o.fcidumps.front();
      auto c = finish(o);
      c.pt2 = !o.no_pt2;
      c.baselines.fci = !o.no_fci;
      std::vector<fs::path> points(o.fcidumps.begin(), o.fcidumps.end());
      const auto results = pec_scan(c, points);
      std::size_t failed = 0;
      for (const auto& r : results) failed += !r;
      std::cout << json{{"curve", (c.output_dir / "curve.csv").string()},
                        {"points", results.size()},
                        {"failed", failed}}
                       .dump(2)
                << '\n';
      return failed ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "qsci: " << error_kind(e) << " error: " << e.what() << '\n';
    return exit_code(e);
  }
  return 0;
}
