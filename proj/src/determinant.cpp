#include "qsci/determinant.hpp"

#include <algorithm>
#include <limits>

#include "qsci/error.hpp"

namespace qsci {

namespace {

void check_orbitals(int n_orb) {
  if (n_orb < 0 || n_orb > kMaxOrbitals)
    throw CapabilityError("orbital count " + std::to_string(n_orb) + " outside [0, 64]");
}

// Sign and mask after moving the sorted holes of one channel to the sorted
// particles, pairwise.
int channel_phase(Mask m, Mask holes, Mask particles) {
  int phase = 1;
  while (holes) {
    const int i = std::countr_zero(holes);
    const int a = std::countr_zero(particles);
    phase *= single_phase(m, i, a);
    m ^= (Mask{1} << i) | (Mask{1} << a);
    holes &= holes - 1;
    particles &= particles - 1;
  }
  return phase;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw CapabilityError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

Determinant hartree_fock(int n_orb, Sector sector) {
  check_orbitals(n_orb);
  if (sector.n_alpha < 0 || sector.n_beta < 0 || sector.n_alpha > n_orb || sector.n_beta > n_orb)
    throw InputError("sector does not fit the orbital count");
  return {low_bits(sector.n_alpha), low_bits(sector.n_beta), n_orb};
}

Determinant from_bitstring(std::string_view bits, int n_orb) {
  check_orbitals(n_orb);
  if (bits.size() != static_cast<std::size_t>(2 * n_orb))
    throw FormatError("bitstring has " + std::to_string(bits.size()) + " characters, expected " +
                      std::to_string(2 * n_orb));
  Determinant d{0, 0, n_orb};
  for (int i = 0; i < 2 * n_orb; ++i) {
    const char c = bits[static_cast<std::size_t>(i)];
    if (c != '0' && c != '1')
      throw FormatError(std::string("invalid bitstring character '") + c + "'");
    if (c == '1') {
      if (i < n_orb)
        d.alpha |= Mask{1} << i;
      else
        d.beta |= Mask{1} << (i - n_orb);
    }
  }
  return d;
}

std::string to_bitstring(const Determinant& d) {
  std::string s(static_cast<std::size_t>(2 * d.n_orb), '0');
  for (int i = 0; i < d.n_orb; ++i) {
    if (d.occupied(Spin::alpha, i)) s[static_cast<std::size_t>(i)] = '1';
    if (d.occupied(Spin::beta, i)) s[static_cast<std::size_t>(d.n_orb + i)] = '1';
  }
  return s;
}

std::vector<int> occupied_list(Mask m) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::popcount(m)));
  for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

int excitation_degree(const Determinant& d1, const Determinant& d2) noexcept {
  return (std::popcount(d1.alpha ^ d2.alpha) + std::popcount(d1.beta ^ d2.beta)) / 2;
}

ExcitationInfo excitation_between(const Determinant& d1, const Determinant& d2) {
  if (d1.n_orb != d2.n_orb) throw DimensionError("determinants have different orbital counts");
  ExcitationInfo info;
  const Mask ha = d1.alpha & ~d2.alpha;
  const Mask pa = d2.alpha & ~d1.alpha;
  const Mask hb = d1.beta & ~d2.beta;
  const Mask pb = d2.beta & ~d1.beta;
  const int na = std::popcount(ha);
  const int nb = std::popcount(hb);
  // Differing per-spin electron counts cannot be connected by the Hamiltonian.
  if (na != std::popcount(pa) || nb != std::popcount(pb) || na + nb > 2) {
    info.degree = kBeyondDouble;
    return info;
  }
  info.degree = na + nb;
  int k = 0;
  for (auto [spin, holes, parts] : {std::tuple{Spin::alpha, ha, pa}, std::tuple{Spin::beta, hb, pb}}) {
    for (Mask h = holes, p = parts; h; h &= h - 1, p &= p - 1) {
      info.holes[static_cast<std::size_t>(k)] = {spin, std::countr_zero(h)};
      info.particles[static_cast<std::size_t>(k)] = {spin, std::countr_zero(p)};
      ++k;
    }
  }
  info.count = k;
  info.phase = channel_phase(d1.alpha, ha, pa) * channel_phase(d1.beta, hb, pb);
  return info;
}

std::pair<Determinant, int> apply_excitation(const Determinant& d,
                                             std::span<const SpinOrbital> holes,
                                             std::span<const SpinOrbital> particles) {
  if (holes.size() != particles.size())
    throw InvalidExcitation("hole and particle lists differ in length");
  Determinant out = d;
  int phase = 1;
  for (std::size_t k = 0; k < holes.size(); ++k) {
    const auto h = holes[k];
    const auto p = particles[k];
    if (h.spin != p.spin) throw InvalidExcitation("excitation changes spin");
    if (h.index < 0 || h.index >= d.n_orb || p.index < 0 || p.index >= d.n_orb)
      throw InvalidExcitation("orbital index out of range");
    Mask& m = out.mask(h.spin);
    if (!((m >> h.index) & 1U))
      throw InvalidExcitation("hole orbital " + std::to_string(h.index) + " is empty");
    m ^= Mask{1} << h.index;
    if ((m >> p.index) & 1U)
      throw InvalidExcitation("particle orbital " + std::to_string(p.index) + " is occupied");
    // Electrons strictly between hole and particle, after the hole is vacated.
    phase *= single_phase(m, h.index, p.index);
    m |= Mask{1} << p.index;
  }
  return {out, phase};
}

std::vector<std::pair<Determinant, ExcitationInfo>> connected_determinants(const Determinant& d) {
  std::vector<std::pair<Determinant, ExcitationInfo>> out;
  for_each_connected(d, [&](const Determinant& e, const ExcitationInfo& info) {
    out.emplace_back(e, info);
  });
  return out;
}

std::uint64_t sector_dimension(int n_orb, Sector sector) {
  const auto a = binomial(n_orb, sector.n_alpha);
  const auto b = binomial(n_orb, sector.n_beta);
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  if (prod > std::numeric_limits<std::uint64_t>::max())
    throw CapabilityError("sector dimension overflows 64 bits");
  return static_cast<std::uint64_t>(prod);
}

std::vector<Determinant> enumerate_sector(int n_orb, Sector sector) {
  check_orbitals(n_orb);
  auto masks = [n_orb](int n) {
    std::vector<Mask> out;
    if (n < 0 || n > n_orb) return out;
    if (n == 0) {
      out.push_back(0);
      return out;
    }
    // Gosper's hack: next mask with the same popcount.
    Mask m = low_bits(n);
    const Mask limit = low_bits(n_orb);
    while (true) {
      out.push_back(m);
      const Mask c = m & (~m + 1);
      const Mask r = m + c;
      if (r == 0 || r > limit) break;
      m = (((r ^ m) >> 2) / c) | r;
      if (m > limit) break;
    }
    return out;
  };
  const auto alphas = masks(sector.n_alpha);
  const auto betas = masks(sector.n_beta);
  std::vector<Determinant> out;
  out.reserve(alphas.size() * betas.size());
  for (Mask a : alphas)
    for (Mask b : betas) out.push_back({a, b, n_orb});
  return out;
}

}  // namespace qsci
