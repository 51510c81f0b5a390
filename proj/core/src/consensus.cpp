#include "comlab/consensus.hpp"

#include <algorithm>
#include <cmath>

#include "comlab/parallel.hpp"
#include "comlab/partitions.hpp"

namespace comlab {

namespace {

// Per-axis nonempty subsets in lexicographic order of the subset vector,
// so rectangle enumeration emits rectangles in lexicographic order.
std::vector<std::vector<int>> axis_subsets(int size, int required_value) {
  std::vector<std::vector<int>> out;
  for (std::uint64_t mask = 1; mask < (1ULL << size); ++mask) {
    if (required_value >= 0 && !(mask >> required_value & 1)) continue;
    std::vector<int> sub;
    for (int v = 0; v < size; ++v) {
      if (mask >> v & 1) sub.push_back(v);
    }
    out.push_back(std::move(sub));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ConsensusRectangle> enumerate_consensus_impl(
    const InformationStructure& s, const Stimulus* x, double epsilon,
    std::uint64_t guard, int threads) {
  const int n = s.agent_count();
  std::vector<std::vector<std::vector<int>>> per_axis(n);
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    if (s.signal_space_size(i) > 62) {
      throw GuardError("signal space too large for subset enumeration");
    }
    per_axis[i] = axis_subsets(s.signal_space_size(i), x ? x->values[i] : -1);
    if (count > guard / per_axis[i].size()) {
      throw GuardError("rectangle enumeration guard exceeded");
    }
    count *= per_axis[i].size();
  }

  std::vector<std::optional<ConsensusRectangle>> slots(count);
  parallel_for(count, threads, [&](std::size_t flat) {
    Hyperrectangle h;
    h.subsets.resize(n);
    std::size_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      h.subsets[i] = per_axis[i][rem % per_axis[i].size()];
      rem /= per_axis[i].size();
    }
    const double mass = rect_prob(s, h);
    if (!(mass > 0.0)) return;
    ConsensusReport report = is_epsilon_consensus(s, h, epsilon);
    if (!report.is_consensus) return;
    ConsensusRectangle item;
    item.rect = std::move(h);
    item.mass = mass;
    item.belief = posterior_global(s, item.rect);
    item.regret = regret_bits(s, item.rect);
    item.per_agent_mi = std::move(report.per_agent_mi);
    slots[flat] = std::move(item);
  });

  // Flat index order equals lexicographic rectangle order because axis
  // subset lists are sorted and the last axis varies fastest.
  std::vector<ConsensusRectangle> out;
  for (auto& slot : slots) {
    if (slot) out.push_back(std::move(*slot));
  }
  std::sort(out.begin(), out.end(),
            [](const ConsensusRectangle& a, const ConsensusRectangle& b) {
              return a.rect < b.rect;
            });
  return out;
}

}  // namespace

ConsensusReport is_epsilon_consensus(const InformationStructure& s,
                                     const Hyperrectangle& h, double epsilon) {
  if (epsilon < 0.0) throw DomainError("epsilon must be nonnegative");
  ConsensusReport report;
  report.epsilon = epsilon;
  report.per_agent_mi.resize(s.agent_count());
  double worst = 0.0;
  for (int i = 0; i < s.agent_count(); ++i) {
    report.per_agent_mi[i] = cond_mutual_info_signal(s, i, h);
    worst = std::max(worst, report.per_agent_mi[i]);
  }
  report.is_consensus = worst <= epsilon + equality_tolerance;
  return report;
}

std::vector<ConsensusRectangle> enumerate_consensus_rectangles(
    const InformationStructure& s, double epsilon, std::uint64_t guard,
    int threads) {
  return enumerate_consensus_impl(s, nullptr, epsilon, guard, threads);
}

std::vector<ConsensusRectangle> enumerate_consensus_rectangles_containing(
    const InformationStructure& s, const Stimulus& x, double epsilon,
    std::uint64_t guard, int threads) {
  return enumerate_consensus_impl(s, &x, epsilon, guard, threads);
}

EquilibriumReport is_beta_equilibrium(const InformationStructure& s,
                                      const Hyperrectangle& h, double beta,
                                      std::uint64_t guard) {
  if (beta < 0.0) throw DomainError("beta must be nonnegative");
  EquilibriumReport report;
  report.beta = beta;

  std::optional<Deviation> best;
  for (int agent = 0; agent < s.agent_count(); ++agent) {
    const auto& values = h.subsets[agent];
    const int m = static_cast<int>(values.size());
    if (m < 2) continue;
    if (bell_number_capped(m, guard) > guard) {
      throw GuardError("partition enumeration guard exceeded for agent " +
                       std::to_string(agent));
    }
    const AgentSlice slice = agent_slice(s, h, agent);
    const int n_outcomes = s.outcome_count();

    std::vector<double> block_mass;
    std::vector<double> block_mix;
    for_each_set_partition(m, [&](std::span<const int> rgs, int blocks) {
      if (blocks == 1) return;  // trivial partition has zero utility
      block_mass.assign(blocks, 0.0);
      block_mix.assign(static_cast<std::size_t>(blocks) * n_outcomes, 0.0);
      for (int k = 0; k < m; ++k) {
        if (slice.mass[k] <= 0.0) continue;
        block_mass[rgs[k]] += slice.mass[k];
        for (int w = 0; w < n_outcomes; ++w) {
          block_mix[rgs[k] * n_outcomes + w] +=
              slice.mass[k] * slice.posterior[k].probs[w];
        }
      }
      double info = 0.0;
      double cost = 0.0;
      for (int b = 0; b < blocks; ++b) {
        const double pm = block_mass[b];
        if (pm <= 0.0) continue;
        cost -= pm * std::log2(pm);
        double kl = 0.0;
        for (int w = 0; w < n_outcomes; ++w) {
          const double p = block_mix[b * n_outcomes + w] / pm;
          if (p > 0.0) kl += p * std::log2(p / slice.global.probs[w]);
        }
        info += pm * std::max(0.0, kl);
      }
      const double utility = info - beta * cost;
      // Strict > keeps the first maximizer: enumeration order is (agent
      // ascending, restricted-growth string lexicographic), which is the
      // documented deterministic tie-break.
      if (!best || utility > best->utility) {
        Deviation d;
        d.agent = agent;
        d.partition.blocks = blocks_from_rgs(rgs, values);
        d.utility = utility;
        best = std::move(d);
      }
    });
  }

  report.worst_deviation = best;
  report.is_equilibrium = !best || best->utility <= norm_tolerance;
  return report;
}

double binary_entropy_inverse(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw DomainError("binary entropy inverse requires eps in (0, 1]");
  }
  if (eps == 1.0) return 0.5;
  double lo = 1e-12;
  double hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy_bits(mid) < eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double b_of_epsilon(double eps) {
  const double x = binary_entropy_inverse(eps);
  return (eps * eps / 16.0) / std::log2(1.0 / x);
}

}  // namespace comlab
