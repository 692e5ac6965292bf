#include "qsci/pt2.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "qsci/error.hpp"
#include "qsci/parallel.hpp"
#include "qsci/slater_condon.hpp"

namespace qsci {

namespace {

constexpr std::size_t kParentBlock = 64;

}  // namespace

std::vector<ExternalDeterminant> external_space(std::span<const Determinant> dets,
                                                std::span<const double> vector, const IntegralStore& store) {
  if (dets.size() != vector.size()) throw DimensionError("determinant and vector sizes differ");
  std::unordered_set<Determinant> inside(dets.begin(), dets.end());
  const std::size_t n_blocks = (dets.size() + kParentBlock - 1) / kParentBlock;
  std::vector<std::unordered_map<Determinant, double>> blocks(n_blocks);
  parallel_for(n_blocks, [&](std::size_t b) {
    auto& acc = blocks[b];
    const std::size_t end = std::min(dets.size(), (b + 1) * kParentBlock);
    for (std::size_t k = b * kParentBlock; k < end; ++k) {
      const double vk = vector[k];
      const auto& parent = dets[k];
      for_each_connected(parent, [&](const Determinant& e, const ExcitationInfo& info) {
        if (inside.contains(e)) return;
        acc[e] += matrix_element(parent, info, store) * vk;
      });
    }
  });

  std::unordered_map<Determinant, double> total;
  for (const auto& block : blocks) {
    std::vector<std::pair<Determinant, double>> sorted(block.begin(), block.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [d, x] : sorted) total[d] += x;
  }
  std::vector<ExternalDeterminant> out;
  out.reserve(total.size());
  for (const auto& [d, x] : total) out.push_back({d, x, 0.0});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.det < b.det; });
  parallel_for(out.size(), [&](std::size_t i) { out[i].diagonal = diagonal_element(out[i].det, store); });
  return out;
}

Pt2Result epstein_nesbet_pt2(std::span<const Determinant> dets, std::span<const double> vector, double energy,
                             const IntegralStore& store) {
  const auto externals = external_space(dets, vector, store);
  Pt2Result r;
  r.n_external = externals.size();
  for (const auto& e : externals) {
    const double den = e.diagonal - energy;
    if (den < kIntruderThreshold) {
      ++r.n_intruders;
      continue;
    }
    r.correction -= e.coupling * e.coupling / den;
  }
  return r;
}

ExtrapolationResult extrapolate_pt2(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw SingularFitError("extrapolation needs at least two points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw SingularFitError("all PT2 corrections are identical");
  ExtrapolationResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.points = points.size();
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double e = y - (r.intercept + r.slope * x);
    ss_res += e * e;
  }
  r.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return r;
}

}  // namespace qsci
