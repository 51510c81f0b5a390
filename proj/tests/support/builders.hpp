#ifndef COMLAB_TESTS_BUILDERS_HPP
#define COMLAB_TESTS_BUILDERS_HPP

#include <string>
#include <vector>

#include "comlab/rng.hpp"
#include "comlab/structure.hpp"

namespace comlab::testing {

inline std::vector<std::string> numeric_labels(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

// Two-agent binary-target structure from flat tables: weights[x*ny+y] and
// p1[x*ny+y] = Pr[W=1 | x, y]. Outcomes are labeled "0", "1".
inline InformationStructure two_agent_binary(
    int nx, int ny, const std::vector<double>& weights,
    const std::vector<double>& p1, const std::string& name = "") {
  RawStructure raw;
  raw.name = name;
  raw.agents = {numeric_labels(nx), numeric_labels(ny)};
  raw.outcomes = {"0", "1"};
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      RawCell cell;
      cell.signals = {std::to_string(x), std::to_string(y)};
      cell.weight = weights[x * ny + y];
      cell.outcome_probs = {1.0 - p1[x * ny + y], p1[x * ny + y]};
      raw.cells.push_back(std::move(cell));
    }
  }
  return validate_structure(raw);
}

// Canonical ambiguous 3x3 scenario: X, Y uniform, binary target with
// conditional table rows (0.5, 0, 0.5), (0, 0.5, 1), (0.5, 1, 0.5).
inline InformationStructure duckrabbit3x3() {
  return two_agent_binary(3, 3, std::vector<double>(9, 1.0),
                          {0.5, 0.0, 0.5, 0.0, 0.5, 1.0, 0.5, 1.0, 0.5},
                          "duckrabbit3x3");
}

// X, Y uniform bits, W = X xor Y: the pure-complements structure.
inline InformationStructure xor2() {
  return two_agent_binary(2, 2, std::vector<double>(4, 1.0),
                          {0.0, 1.0, 1.0, 0.0}, "xor2");
}

// Two agents observing the target itself: X1 = X2 = W with W ~ (1-p, p).
inline InformationStructure identical_copies(double p) {
  return two_agent_binary(2, 2, {1.0 - p, 0.0, 0.0, p}, {0.0, 0.5, 0.5, 1.0});
}

inline double grid_value(SplitMix64& rng) {
  return static_cast<double>(1 + rng.next_below(7)) / 8.0;
}

// Conditionally independent structure (signals independent given the
// target). Chunky mode samples likelihoods from a coarse grid and
// duplicates channel columns, which creates exact nontrivial consensus
// rectangles; continuous mode has generic posteriors.
inline InformationStructure random_cond_indep(SplitMix64& rng, int nx, int ny,
                                              bool chunky) {
  auto pick = [&](bool c) { return c ? grid_value(rng) : 0.02 + 0.96 * rng.next_double(); };
  const double pw = pick(chunky);
  std::vector<std::vector<double>> cx(nx, std::vector<double>(2));
  std::vector<std::vector<double>> cy(ny, std::vector<double>(2));
  for (auto& col : cx) col = {pick(chunky), pick(chunky)};
  for (auto& col : cy) col = {pick(chunky), pick(chunky)};
  if (chunky && nx >= 2 && rng.next_double() < 0.7) cx[1] = cx[0];
  if (chunky && ny >= 2 && rng.next_double() < 0.7) cy[1] = cy[0];

  double zx0 = 0.0, zx1 = 0.0, zy0 = 0.0, zy1 = 0.0;
  for (const auto& c : cx) zx0 += c[0], zx1 += c[1];
  for (const auto& c : cy) zy0 += c[0], zy1 += c[1];

  std::vector<double> weights(nx * ny);
  std::vector<double> p1(nx * ny);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const double j1 = pw * (cx[x][1] / zx1) * (cy[y][1] / zy1);
      const double j0 = (1.0 - pw) * (cx[x][0] / zx0) * (cy[y][0] / zy0);
      weights[x * ny + y] = j0 + j1;
      p1[x * ny + y] = j1 / (j0 + j1);
    }
  }
  return two_agent_binary(nx, ny, weights, p1);
}

// Fully generic two-agent binary structure with positive weights.
inline InformationStructure random_general(SplitMix64& rng, int nx, int ny) {
  std::vector<double> weights(nx * ny);
  std::vector<double> p1(nx * ny);
  for (auto& w : weights) w = 0.05 + rng.next_double();
  for (auto& p : p1) p = 0.02 + 0.96 * rng.next_double();
  return two_agent_binary(nx, ny, weights, p1);
}

// Rectangle from explicit axis subsets.
inline Hyperrectangle rect(std::vector<std::vector<int>> subsets) {
  return Hyperrectangle{std::move(subsets)};
}

// Every positive-mass rectangle of a small structure, lexicographic.
inline std::vector<Hyperrectangle> all_rectangles(
    const InformationStructure& s) {
  std::vector<std::vector<std::vector<int>>> axis(s.agent_count());
  for (int i = 0; i < s.agent_count(); ++i) {
    const int m = s.signal_space_size(i);
    for (std::uint64_t mask = 1; mask < (1ULL << m); ++mask) {
      std::vector<int> sub;
      for (int v = 0; v < m; ++v) {
        if (mask >> v & 1) sub.push_back(v);
      }
      axis[i].push_back(std::move(sub));
    }
    std::sort(axis[i].begin(), axis[i].end());
  }
  std::vector<Hyperrectangle> out;
  std::vector<std::size_t> pos(s.agent_count(), 0);
  for (;;) {
    Hyperrectangle h;
    for (int i = 0; i < s.agent_count(); ++i) h.subsets.push_back(axis[i][pos[i]]);
    if (rect_prob(s, h) > 0.0) out.push_back(std::move(h));
    int i = s.agent_count() - 1;
    while (i >= 0 && ++pos[i] == axis[i].size()) pos[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace comlab::testing

#endif
