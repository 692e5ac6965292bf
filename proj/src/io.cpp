#include "qsci/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "qsci/error.hpp"

namespace qsci {

namespace fs = std::filesystem;

namespace {

std::string format(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if constexpr (std::is_floating_point_v<T>) {
    std::string tmp(s);
    char* end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    return !tmp.empty() && end == tmp.c_str() + tmp.size();
  } else {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
  }
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

}  // namespace

std::string format_energy(double e) { return format("%.12f", e); }

void write_measurement_set(std::ostream& out, const MeasurementSet& set) {
  out << "# time=" << format("%.17g", set.time) << " shots=" << set.shots.size() << " nqubits=" << set.n_qubits
      << '\n';
  for (const auto& s : set.shots) out << s << '\n';
}

MeasurementSet parse_measurement_set(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  std::istringstream hdr(line);
  std::string hash;
  hdr >> hash;
  if (hash != "#") throw ParseError(1, "header must start with '#'");
  std::map<std::string, std::string> fields;
  for (std::string kv; hdr >> kv;) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError(1, "expected key=value, got '" + kv + "'");
    fields[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  MeasurementSet set;
  std::size_t shots = 0;
  for (const char* key : {"time", "shots", "nqubits"})
    if (!fields.contains(key)) throw ParseError(1, std::string("header lacks ") + key);
  if (!parse_number(fields["time"], set.time)) throw ParseError(1, "bad time");
  if (!parse_number(fields["shots"], shots)) throw ParseError(1, "bad shot count");
  if (!parse_number(fields["nqubits"], set.n_qubits) || set.n_qubits < 2 || set.n_qubits % 2 || set.n_qubits > 128)
    throw ParseError(1, "bad qubit count");

  const auto width = static_cast<std::size_t>(set.n_qubits);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.size() != width)
      throw ParseError(lineno, "bitstring of length " + std::to_string(line.size()) + ", expected " +
                                   std::to_string(width));
    if (line.find_first_not_of("01") != std::string::npos) throw ParseError(lineno, "bitstring has characters other than 0/1");
    set.shots.push_back(line);
  }
  if (set.shots.size() != shots)
    throw ParseError(lineno, "header announces " + std::to_string(shots) + " shots, file has " +
                                 std::to_string(set.shots.size()));
  return set;
}

MeasurementSet read_measurement_set(const fs::path& path) {
  auto in = open_in(path);
  try {
    return parse_measurement_set(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail() + " (" + path.string() + ")");
  }
}

void write_measurements(const fs::path& dir, std::span<const MeasurementSet> sets) {
  fs::create_directories(dir);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    auto out = open_out(dir / ("step_" + std::to_string(k + 1) + ".txt"));
    write_measurement_set(out, sets[k]);
  }
}

std::vector<MeasurementSet> read_measurements(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file or directory: " + path.string());
  if (!fs::is_directory(path)) return {read_measurement_set(path)};
  std::vector<std::pair<int, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    const auto name = entry.path().filename().string();
    int k = 0;
    if (name.starts_with("step_") && name.ends_with(".txt") &&
        parse_number(std::string_view(name).substr(5, name.size() - 9), k))
      files.emplace_back(k, entry.path());
  }
  if (files.empty()) throw IoError("no step_<k>.txt files in " + path.string());
  std::sort(files.begin(), files.end());
  std::vector<MeasurementSet> sets;
  for (const auto& [k, p] : files) sets.push_back(read_measurement_set(p));
  return sets;
}

namespace {

constexpr char kMagic[8] = {'Q', 'S', 'C', 'I', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <typename T>
  void put(const T& x) {
    static_assert(std::is_trivially_copyable_v<T>);
    out_.write(reinterpret_cast<const char*>(&x), sizeof x);
  }
  template <typename T>
  void put_vector(const std::vector<T>& v) {
    put<std::uint64_t>(v.size());
    for (const auto& x : v) put(x);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  template <typename T>
  T get() {
    T x;
    if (!in_.read(reinterpret_cast<char*>(&x), sizeof x)) throw FormatError("truncated checkpoint");
    return x;
  }
  template <typename T>
  std::vector<T> get_vector(std::uint64_t limit = 1ULL << 32) {
    const auto n = get<std::uint64_t>();
    if (n > limit) throw FormatError("implausible length in checkpoint");
    std::vector<T> v;
    v.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) v.push_back(get<T>());
    return v;
  }

 private:
  std::istream& in_;
};

struct PackedDet {
  std::uint64_t alpha, beta;
};

struct PackedTrace {
  std::uint64_t outer;
  std::int64_t round;
  std::uint64_t n_dets;
  double energy, delta;
  std::uint64_t n_dets_filtered;
  double energy_filtered;
};

struct PackedSnapshot {
  std::uint64_t outer, n_dets;
  double energy, correction;
  std::uint64_t n_intruders;
};

}  // namespace

void write_checkpoint(const fs::path& path, const Checkpoint& ck) {
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    auto out = open_out(tmp, std::ios::binary);
    Writer w(out);
    out.write(kMagic, sizeof kMagic);
    w.put(kCheckpointVersion);
    const auto& s = ck.state;
    w.put(ck.seed);
    w.put<std::int32_t>(s.dets.empty() ? 0 : s.dets.front().n_orb);
    std::vector<PackedDet> dets;
    for (const auto& d : s.dets) dets.push_back({d.alpha, d.beta});
    w.put_vector(dets);
    w.put_vector(s.vector);
    w.put(s.energy);
    w.put(s.counter);
    w.put<std::int64_t>(s.next_round);
    w.put(s.delta);
    w.put<std::uint8_t>(s.needs_solve);
    std::vector<PackedTrace> trace;
    for (const auto& r : s.trace)
      trace.push_back({r.outer, r.round, r.n_dets, r.energy, r.delta, r.n_dets_filtered, r.energy_filtered});
    w.put_vector(trace);
    std::vector<PackedSnapshot> snaps;
    for (const auto& p : ck.snapshots) snaps.push_back({p.outer, p.n_dets, p.energy, p.correction, p.n_intruders});
    w.put_vector(snaps);
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

Checkpoint read_checkpoint(const fs::path& path, const IntegralStore& store) {
  auto in = open_in(path, std::ios::binary);
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw FormatError(path.string() + " is not a checkpoint");
  Reader r(in);
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw FormatError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  Checkpoint ck;
  ck.seed = r.get<std::uint64_t>();
  const auto n_orb = r.get<std::int32_t>();
  if (n_orb != store.n_orb()) throw InputError("checkpoint orbital count does not match the integrals");
  auto& s = ck.state;
  for (const auto& p : r.get_vector<PackedDet>()) s.dets.push_back({p.alpha, p.beta, n_orb});
  s.vector = r.get_vector<double>();
  s.energy = r.get<double>();
  s.counter = r.get<std::uint64_t>();
  s.next_round = static_cast<int>(r.get<std::int64_t>());
  s.delta = r.get<double>();
  s.needs_solve = r.get<std::uint8_t>() != 0;
  for (const auto& t : r.get_vector<PackedTrace>())
    s.trace.push_back({t.outer, static_cast<int>(t.round), t.n_dets, t.energy, t.delta, t.n_dets_filtered,
                       t.energy_filtered});
  for (const auto& p : r.get_vector<PackedSnapshot>())
    ck.snapshots.push_back({p.outer, p.n_dets, p.energy, p.correction, p.n_intruders});
  if (s.dets.empty()) throw FormatError("checkpoint holds no determinants");
  rebuild(s, store);
  return ck;
}

void write_trace_csv(std::ostream& out, const std::string& method, std::span<const TraceRecord> trace,
                     bool header) {
  if (header) out << "method,outer,round,n_dets,energy,delta,n_dets_filtered,energy_filtered\n";
  for (const auto& r : trace)
    out << method << ',' << r.outer << ',' << r.round << ',' << r.n_dets << ',' << format_energy(r.energy) << ','
        << format("%.6e", r.delta) << ',' << r.n_dets_filtered << ',' << format_energy(r.energy_filtered) << '\n';
}

void write_snapshots_csv(std::ostream& out, std::span<const Pt2Snapshot> snapshots) {
  out << "outer,n_dets,energy,eps_pt2,energy_pt2,n_intruders\n";
  for (const auto& s : snapshots)
    out << s.outer << ',' << s.n_dets << ',' << format_energy(s.energy) << ',' << format_energy(s.correction) << ','
        << format_energy(s.energy + s.correction) << ',' << s.n_intruders << '\n';
}

std::vector<std::pair<double, double>> read_pt2_points(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty file");
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    return cells;
  };
  const auto head = split(line);
  const auto col = [&](const std::string& name) {
    const auto it = std::find(head.begin(), head.end(), name);
    if (it == head.end()) throw ParseError(1, "no '" + name + "' column");
    return static_cast<std::size_t>(it - head.begin());
  };
  const auto ce = col("eps_pt2");
  const auto cv = col("energy");
  std::vector<std::pair<double, double>> points;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const auto cells = split(line);
    std::pair<double, double> p;
    if (cells.size() <= std::max(ce, cv) || !parse_number(cells[ce], p.first) || !parse_number(cells[cv], p.second))
      throw ParseError(lineno, "bad row");
    points.push_back(p);
  }
  return points;
}

void write_wavefunction(std::ostream& out, std::span<const Determinant> dets, std::span<const double> vector) {
  for (std::size_t k = 0; k < dets.size(); ++k) out << to_bitstring(dets[k]) << ' ' << format("%.17g", vector[k]) << '\n';
}

std::pair<std::vector<Determinant>, std::vector<double>> read_wavefunction(std::istream& in, int n_orb) {
  std::pair<std::vector<Determinant>, std::vector<double>> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string bits, amp;
    double x = 0.0;
    if (!(ls >> bits >> amp) || !parse_number(amp, x)) throw ParseError(lineno, "expected '<bitstring> <amplitude>'");
    try {
      out.first.push_back(from_bitstring(bits, n_orb));
    } catch (const FormatError& e) {
      throw ParseError(lineno, e.what());
    }
    out.second.push_back(x);
  }
  if (out.first.empty()) throw InputError("wavefunction file holds no determinants");
  return out;
}

}  // namespace qsci
