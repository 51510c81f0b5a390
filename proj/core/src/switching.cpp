#include "comlab/switching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "comlab/complexity.hpp"

namespace comlab {

double switching_cost_via(const InformationStructure& s,
                          const Hyperrectangle& h,
                          const Hyperrectangle& h_prime,
                          const Hyperrectangle& hat) {
  if (!hat.contains(h) || !hat.contains(h_prime)) {
    throw DomainError("hat must contain both histories");
  }
  const double hat_mass = rect_prob(s, hat);
  const double h_mass = rect_prob(s, h);
  const double hp_mass = rect_prob(s, h_prime);
  if (!(hat_mass > 0.0) || !(h_mass > 0.0) || !(hp_mass > 0.0)) {
    throw DomainError("zero-mass rectangle in switching cost");
  }
  const double cost =
      -std::log2(h_mass / hat_mass) - std::log2(hp_mass / hat_mass);
  return cost < 0.0 ? 0.0 : cost;
}

SwitchReport min_switching_cost(const InformationStructure& s,
                                const Hyperrectangle& h,
                                const Hyperrectangle& h_prime,
                                std::uint64_t guard) {
  const Hyperrectangle hull = axis_union(h, h_prime);
  const int n = s.agent_count();

  // Enumerate every rectangle containing the hull by adding subsets of the
  // complement values per axis. The cost depends on the candidate only
  // through its mass, but enumeration is exhaustive so that the documented
  // tie-break (smallest mass, then lexicographic order) is what is shipped.
  std::vector<std::vector<int>> free_values(n);
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < s.signal_space_size(i); ++v) {
      if (!std::binary_search(hull.subsets[i].begin(), hull.subsets[i].end(),
                              v)) {
        free_values[i].push_back(v);
      }
    }
    if (free_values[i].size() >= 62) {
      throw GuardError("signal space too large for hat enumeration");
    }
    const std::uint64_t axis_count = 1ULL << free_values[i].size();
    if (count > guard / axis_count) {
      throw GuardError("hat enumeration guard exceeded");
    }
    count *= axis_count;
  }

  SwitchReport report;
  report.h = h;
  report.h_prime = h_prime;
  report.cost_bits = std::numeric_limits<double>::infinity();
  double best_mass = std::numeric_limits<double>::infinity();

  std::vector<std::uint64_t> masks(n, 0);
  for (std::uint64_t flat = 0; flat < count; ++flat) {
    std::uint64_t rem = flat;
    Hyperrectangle hat = hull;
    for (int i = n - 1; i >= 0; --i) {
      const std::uint64_t axis_count = 1ULL << free_values[i].size();
      const std::uint64_t mask = rem % axis_count;
      rem /= axis_count;
      for (std::size_t b = 0; b < free_values[i].size(); ++b) {
        if (mask >> b & 1) hat.subsets[i].push_back(free_values[i][b]);
      }
      std::sort(hat.subsets[i].begin(), hat.subsets[i].end());
    }
    const double mass = rect_prob(s, hat);
    if (!(mass > 0.0)) continue;
    const double cost = switching_cost_via(s, h, h_prime, hat);
    const bool better =
        cost < report.cost_bits - norm_tolerance ||
        (cost <= report.cost_bits + norm_tolerance &&
         (mass < best_mass - norm_tolerance ||
          (mass <= best_mass + norm_tolerance && hat < report.best_hat)));
    if (better) {
      report.cost_bits = cost;
      best_mass = mass;
      report.best_hat = std::move(hat);
    }
  }
  if (!std::isfinite(report.cost_bits)) {
    throw DomainError("no positive-mass hat contains both histories");
  }

  const double h_mass = rect_prob(s, h);
  const double hp_mass = rect_prob(s, h_prime);
  auto common = intersect(h, h_prime);
  const double inter = common ? rect_prob(s, *common) : 0.0;
  report.ell_lower_bound_bits = ell_bound(inter / h_mass, inter / hp_mass);
  report.tv =
      tv_distance(posterior_global(s, h), posterior_global(s, h_prime));
  return report;
}

double ell_bound(double p, double q) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) {
    throw DomainError("overlap probabilities must lie in [0, 1]");
  }
  if (p == 0.0 || q == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double value = std::log2((1.0 + p / q - p) * (1.0 + q / p - q));
  return value < 0.0 ? 0.0 : value;
}

SwitchDivergenceVerdict switch_divergence_bound(const InformationStructure& s,
                                                const Stimulus& x,
                                                const Hyperrectangle& h,
                                                const Hyperrectangle& h_prime,
                                                double epsilon,
                                                std::uint64_t guard) {
  if (!h.contains(x) || !h_prime.contains(x)) {
    throw DomainError("both histories must contain the stimulus");
  }
  if (!is_epsilon_consensus(s, h, epsilon).is_consensus ||
      !is_epsilon_consensus(s, h_prime, epsilon).is_consensus) {
    throw DomainError("both histories must be epsilon-consensus");
  }
  SwitchDivergenceVerdict verdict;
  verdict.report = min_switching_cost(s, h, h_prime, guard);
  verdict.cost_bits = verdict.report.cost_bits;
  if (verdict.cost_bits > 1.0 + norm_tolerance) {
    throw DomainError("divergence bound applies only when the switching cost "
                      "is at most 1 bit");
  }
  verdict.gestalt_bits = gestalt_stimulus(s, x, epsilon, guard).bits;
  const double b = verdict.cost_bits;
  verdict.bound = std::min(2.0 * (1.0 - std::exp2(-b)),
                           std::sqrt(std::exp2(b + 1.0) * verdict.gestalt_bits));
  verdict.tv = verdict.report.tv;
  verdict.bound_holds = verdict.tv <= verdict.bound + equality_tolerance;
  verdict.report.bound_applied = verdict.bound;
  return verdict;
}

}  // namespace comlab
