#include "qsci/integrals.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "qsci/error.hpp"

namespace qsci {

IntegralStore::IntegralStore(int n_orb, int n_elec, int ms2)
    : n_orb_(n_orb), n_elec_(n_elec), ms2_(ms2) {
  if (n_orb < 0 || n_orb > kMaxOrbitals)
    throw CapabilityError("NORB=" + std::to_string(n_orb) + " outside [0, 64]");
  const auto m = static_cast<std::size_t>(n_orb);
  const std::size_t pairs = m * (m + 1) / 2;
  one_.assign(m * m, 0.0);
  two_.assign(pairs * (pairs + 1) / 2, 0.0);
}

Sector IntegralStore::sector() const {
  if ((n_elec_ + ms2_) % 2 != 0 || n_elec_ < 0 || ms2_ > n_elec_ || -ms2_ > n_elec_)
    throw InputError("NELEC and MS2 do not define a valid sector");
  const Sector s{(n_elec_ + ms2_) / 2, (n_elec_ - ms2_) / 2};
  if (s.n_alpha > n_orb_ || s.n_beta > n_orb_)
    throw InputError("more electrons per spin than orbitals");
  return s;
}

void IntegralStore::check(int p) const {
  if (p < 0 || p >= n_orb_)
    throw InputError("orbital index " + std::to_string(p) + " outside [0, " +
                     std::to_string(n_orb_) + ")");
}

double IntegralStore::one_body(int p, int q) const {
  check(p);
  check(q);
  return h(p, q);
}

void IntegralStore::set_one_body(int p, int q, double value) {
  check(p);
  check(q);
  one_[static_cast<std::size_t>(p * n_orb_ + q)] = value;
  one_[static_cast<std::size_t>(q * n_orb_ + p)] = value;
}

double IntegralStore::two_body(int p, int q, int r, int s) const {
  check(p);
  check(q);
  check(r);
  check(s);
  return g(p, q, r, s);
}

void IntegralStore::set_two_body(int p, int q, int r, int s, double value) {
  check(p);
  check(q);
  check(r);
  check(s);
  two_[packed_index(p, q, r, s)] = value;
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::optional<long> header_value(const std::string& header, const std::string& key) {
  // Keys are matched as whole words followed by '='.
  std::size_t pos = 0;
  while ((pos = header.find(key, pos)) != std::string::npos) {
    const bool word_start =
        pos == 0 || !std::isalnum(static_cast<unsigned char>(header[pos - 1]));
    std::size_t eq = pos + key.size();
    while (eq < header.size() && std::isspace(static_cast<unsigned char>(header[eq]))) ++eq;
    if (word_start && eq < header.size() && header[eq] == '=') {
      std::size_t v = eq + 1;
      while (v < header.size() && std::isspace(static_cast<unsigned char>(header[v]))) ++v;
      long out = 0;
      const char* first = header.data() + v;
      const char* last = header.data() + header.size();
      if (v < header.size() && header[v] == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, out);
      if (ec != std::errc{}) throw ParseError(1, "non-integer value for " + key);
      return out;
    }
    pos += key.size();
  }
  return std::nullopt;
}

bool parse_double(std::string_view tok, double& out) {
  std::string t(tok);
  // Fortran exponent markers.
  for (auto& c : t)
    if (c == 'D' || c == 'd') c = 'E';
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc{} && ptr == t.data() + t.size();
}

}  // namespace

IntegralStore parse_fcidump(std::istream& in) {
  std::string header;
  std::string line;
  std::size_t line_no = 0;
  bool ended = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string u = upper(line);
    header += ' ';
    header += u;
    if (u.find("&END") != std::string::npos || u.find('/') != std::string::npos) {
      ended = true;
      break;
    }
  }
  if (!ended || header.find("&FCI") == std::string::npos)
    throw ParseError(line_no == 0 ? 1 : line_no, "missing &FCI ... &END header");
  const auto norb = header_value(header, "NORB");
  const auto nelec = header_value(header, "NELEC");
  if (!norb || !nelec) throw ParseError(line_no, "header lacks NORB or NELEC");
  const long ms2 = header_value(header, "MS2").value_or(0);
  if (*norb < 0 || *norb > kMaxOrbitals) throw ParseError(line_no, "NORB outside [0, 64]");
  if (*nelec < 0 || *nelec > 2 * *norb) throw ParseError(line_no, "NELEC inconsistent with NORB");

  IntegralStore store(static_cast<int>(*norb), static_cast<int>(*nelec), static_cast<int>(ms2));
  const long n = *norb;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tok[5];
    int count = 0;
    std::string extra;
    while (count < 5 && ss >> tok[count]) ++count;
    if (count == 0) continue;
    if (count != 5 || (ss >> extra)) throw ParseError(line_no, "expected `value p q r s`");
    double value = 0.0;
    if (!parse_double(tok[0], value)) throw ParseError(line_no, "non-numeric value '" + tok[0] + "'");
    long idx[4];
    for (int k = 0; k < 4; ++k) {
      const auto& t = tok[k + 1];
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), idx[k]);
      if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ParseError(line_no, "non-integer index '" + t + "'");
      if (idx[k] < 0 || idx[k] > n) throw ParseError(line_no, "index " + t + " out of range");
    }
    const auto [p, q, r, s] = std::tuple{idx[0], idx[1], idx[2], idx[3]};
    if (p == 0 && q == 0 && r == 0 && s == 0) {
      store.set_core_energy(value);
    } else if (r == 0 && s == 0) {
      if (p == 0 || q == 0) throw ParseError(line_no, "one-electron entry with zero index");
      store.set_one_body(static_cast<int>(p - 1), static_cast<int>(q - 1), value);
    } else {
      if (p == 0 || q == 0 || r == 0 || s == 0)
        throw ParseError(line_no, "two-electron entry with zero index");
      store.set_two_body(static_cast<int>(p - 1), static_cast<int>(q - 1), static_cast<int>(r - 1),
                         static_cast<int>(s - 1), value);
    }
  }
  return store;
}

IntegralStore read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open FCIDUMP '" + path + "'");
  return parse_fcidump(in);
}

void write_fcidump(std::ostream& out, const IntegralStore& store) {
  const int n = store.n_orb();
  out << " &FCI NORB=" << n << ",NELEC=" << store.n_elec() << ",MS2=" << store.ms2() << ",\n";
  out << "  ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  char buf[64];
  auto emit = [&](double v, int p, int q, int r, int s) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ' ' << buf << ' ' << p << ' ' << q << ' ' << r << ' ' << s << '\n';
  };
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          const int pq = p * (p + 1) / 2 + q;
          const int rs = r * (r + 1) / 2 + s;
          if (rs > pq) continue;
          const double v = store.g(p, q, r, s);
          if (v != 0.0) emit(v, p + 1, q + 1, r + 1, s + 1);
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      if (store.h(p, q) != 0.0) emit(store.h(p, q), p + 1, q + 1, 0, 0);
  emit(store.core_energy(), 0, 0, 0, 0);
}

}  // namespace qsci
