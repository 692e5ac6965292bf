#include "qsci/qubit_hamiltonian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "qsci/error.hpp"

namespace qsci {

std::string PauliString::to_string() const {
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = 0; q < n_qubits; ++q) {
    const bool xb = (x >> q) & 1U;
    const bool zb = (z >> q) & 1U;
    s[static_cast<std::size_t>(q)] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return s;
}

PauliString PauliString::parse(std::string_view word) {
  if (word.size() > 64) throw CapabilityError("Pauli word longer than 64 qubits");
  PauliString p{0, 0, static_cast<int>(word.size())};
  for (std::size_t q = 0; q < word.size(); ++q) {
    const Mask bit = Mask{1} << q;
    switch (word[q]) {
      case 'I': break;
      case 'X': p.x |= bit; break;
      case 'Y': p.x |= bit; p.z |= bit; break;
      case 'Z': p.z |= bit; break;
      default: throw FormatError(std::string("invalid Pauli character '") + word[q] + "'");
    }
  }
  return p;
}

PauliSum PauliSum::from_terms(int n_qubits, std::vector<PauliTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
  PauliSum out(n_qubits);
  for (auto& t : terms) {
    if (t.string.n_qubits != n_qubits) throw DimensionError("Pauli word length mismatch");
    if (!out.terms_.empty() && out.terms_.back().string == t.string)
      out.terms_.back().coefficient += t.coefficient;
    else
      out.terms_.push_back(t);
  }
  std::erase_if(out.terms_, [](const PauliTerm& t) { return std::abs(t.coefficient) < kPruneThreshold; });
  return out;
}

double PauliSum::identity_coefficient() const {
  for (const auto& t : terms_)
    if (t.string.is_identity()) return t.coefficient;
  return 0.0;
}

namespace {

// Operator X^x Z^z with a real weight. Ladder operators are real combinations
// of these: a_j = (X_j Z_<j - X_j Z_j Z_<j) / 2 and a+_j with a plus sign.
struct XZ {
  Mask x;
  Mask z;
  double c;
};

struct XZKey {
  Mask x;
  Mask z;
  friend bool operator==(const XZKey&, const XZKey&) = default;
};

struct XZHash {
  std::size_t operator()(const XZKey& k) const noexcept {
    return static_cast<std::size_t>(splitmix64(k.x) ^ (splitmix64(k.z) << 1));
  }
};

std::array<XZ, 2> ladder(int q, bool create) {
  const Mask lower = low_bits(q);
  const Mask bit = Mask{1} << q;
  return {XZ{bit, lower, 0.5}, XZ{bit, lower | bit, create ? 0.5 : -0.5}};
}

// (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{|z1 & x2|} X^(x1^x2) Z^(z1^z2).
XZ multiply(const XZ& a, const XZ& b) {
  const double sign = (std::popcount(a.z & b.x) & 1) ? -1.0 : 1.0;
  return {a.x ^ b.x, a.z ^ b.z, sign * a.c * b.c};
}

// Expands c * op[0] op[1] ... op[k-1] into the accumulator.
void expand(double c, std::span<const std::pair<int, bool>> ops,
            std::unordered_map<XZKey, double, XZHash>& acc) {
  std::array<std::array<XZ, 2>, 4> parts;
  for (std::size_t k = 0; k < ops.size(); ++k) parts[k] = ladder(ops[k].first, ops[k].second);
  const std::size_t combos = std::size_t{1} << ops.size();
  for (std::size_t m = 0; m < combos; ++m) {
    XZ prod{0, 0, c};
    for (std::size_t k = 0; k < ops.size(); ++k) prod = multiply(prod, parts[k][(m >> k) & 1U]);
    acc[{prod.x, prod.z}] += prod.c;
  }
}

}  // namespace

PauliSum jordan_wigner(const IntegralStore& store) {
  const int m = store.n_orb();
  const int nq = 2 * m;
  if (nq > 64) throw CapabilityError("Jordan-Wigner mapping limited to 64 qubits");
  auto qubit = [m](int orb, int spin) { return orb + spin * m; };

  std::unordered_map<XZKey, double, XZHash> acc;
  acc[{0, 0}] += store.core_energy();
  for (int spin = 0; spin < 2; ++spin)
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) {
        const double h = store.h(p, q);
        if (h == 0.0) continue;
        const std::pair<int, bool> ops[] = {{qubit(p, spin), true}, {qubit(q, spin), false}};
        expand(h, ops, acc);
      }
  // 1/2 sum (pq|rs) a+_{p s1} a+_{r s2} a_{s s2} a_{q s1}
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
          for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) {
              const int qp = qubit(p, s1), qq = qubit(q, s1), qr = qubit(r, s2), qs = qubit(s, s2);
              if (qp == qr || qq == qs) continue;
              const double g = store.g(p, q, r, s);
              if (g == 0.0) continue;
              const std::pair<int, bool> ops[] = {{qp, true}, {qr, true}, {qs, false}, {qq, false}};
              expand(0.5 * g, ops, acc);
            }

  // X^x Z^z = (-i)^{|x & z|} * (Pauli word with Y where x and z overlap).
  std::vector<PauliTerm> terms;
  terms.reserve(acc.size());
  for (const auto& [key, c] : acc) {
    const int ny = std::popcount(key.x & key.z) & 3;
    if (ny % 2 == 1) {
      if (std::abs(c) > 1e-10) throw Error("Jordan-Wigner produced a non-Hermitian term");
      continue;
    }
    terms.push_back({ny == 2 ? -c : c, PauliString{key.x, key.z, nq}});
  }
  return PauliSum::from_terms(nq, std::move(terms));
}

double l1_norm(const PauliSum& h) {
  double s = 0.0;
  for (const auto& t : h.terms())
    if (!t.string.is_identity()) s += std::abs(t.coefficient);
  return s;
}

void write_pauli_sum(std::ostream& out, const PauliSum& h) {
  char buf[64];
  for (const auto& t : h.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.coefficient);
    out << buf << ' ' << t.string.to_string() << '\n';
  }
}

PauliSum read_pauli_sum(std::istream& in) {
  std::vector<PauliTerm> terms;
  std::string line;
  std::size_t line_no = 0;
  int nq = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    double c;
    std::string word;
    if (!(ss >> c)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(line_no, "expected `coefficient word`");
    }
    if (!(ss >> word)) throw ParseError(line_no, "missing Pauli word");
    try {
      terms.push_back({c, PauliString::parse(word)});
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    if (nq >= 0 && static_cast<int>(word.size()) != nq) throw ParseError(line_no, "inconsistent word length");
    nq = static_cast<int>(word.size());
  }
  return PauliSum::from_terms(std::max(nq, 0), std::move(terms));
}

}  // namespace qsci
