#include "comlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace comlab {

ProtocolPartition make_partition(const InformationStructure& s,
                                 std::vector<Hyperrectangle> leaves) {
  std::sort(leaves.begin(), leaves.end());
  ProtocolPartition part;
  part.leaves = std::move(leaves);

  // Disjointness: mark cell ownership; coverage: every positive-mass cell
  // must be owned.
  std::map<std::vector<int>, int> owner;
  for (std::size_t i = 0; i < part.leaves.size(); ++i) {
    s.for_each_cell_in(part.leaves[i], [&](std::span<const int> tuple, double,
                                           std::span<const double>) {
      auto [it, inserted] =
          owner.emplace(std::vector<int>(tuple.begin(), tuple.end()),
                        static_cast<int>(i));
      if (!inserted) throw ValidationError("partition leaves overlap");
    });
  }
  s.for_each_cell_in(
      s.full_space(),
      [&](std::span<const int> tuple, double w, std::span<const double>) {
        if (w > 0.0 &&
            !owner.count(std::vector<int>(tuple.begin(), tuple.end()))) {
          throw ValidationError(
              "partition does not cover all positive-mass stimuli");
        }
      });

  for (const auto& leaf : part.leaves) {
    const double mass = rect_prob(s, leaf);
    if (!(mass > 0.0)) throw ValidationError("partition has a zero-mass leaf");
    part.masses.push_back(mass);
    part.beliefs.push_back(posterior_global(s, leaf));
  }
  return part;
}

ProtocolPartition trivial_partition(const InformationStructure& s) {
  return make_partition(s, {s.full_space()});
}

ProtocolPartition full_reveal_partition(const InformationStructure& s) {
  std::vector<Hyperrectangle> leaves;
  s.for_each_cell_in(
      s.full_space(),
      [&](std::span<const int> tuple, double w, std::span<const double>) {
        if (w <= 0.0) return;
        Hyperrectangle cell;
        for (int v : tuple) cell.subsets.push_back({v});
        leaves.push_back(std::move(cell));
      });
  return make_partition(s, std::move(leaves));
}

ProtocolPartition partition_from_protocol(const InformationStructure& s,
                                          const Protocol& p) {
  std::vector<Hyperrectangle> leaves;
  for (const Stimulus& x : positive_stimuli(s)) {
    Transcript t = run_protocol(s, p, x);
    const Hyperrectangle& final_rect =
        t.rounds.empty() ? t.initial_rect : t.rounds.back().rect;
    leaves.push_back(final_rect);
  }
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  return make_partition(s, std::move(leaves));
}

double accuracy_bits(const InformationStructure& s,
                     const ProtocolPartition& part) {
  const OutcomeDistribution prior = posterior_global(s, s.full_space());
  double v = 0.0;
  for (std::size_t i = 0; i < part.leaves.size(); ++i) {
    v += part.masses[i] * kl_divergence_bits(part.beliefs[i], prior);
  }
  return v < 0.0 ? 0.0 : v;
}

double info_cost_bits(const InformationStructure& s,
                      const ProtocolPartition& part) {
  (void)s;
  double h = 0.0;
  for (double m : part.masses) {
    if (m > 0.0) h -= m * std::log2(m);
  }
  return h < 0.0 ? 0.0 : h;
}

double objective_bits(const InformationStructure& s,
                      const ProtocolPartition& part, double beta) {
  if (beta < 0.0) throw DomainError("beta must be nonnegative");
  return accuracy_bits(s, part) - beta * info_cost_bits(s, part);
}

std::vector<PartitionMove> enumerate_moves(const InformationStructure& s,
                                           const ProtocolPartition& part,
                                           NeighborMode mode) {
  std::vector<PartitionMove> moves;
  const int n = s.agent_count();

  for (std::size_t leaf = 0; leaf < part.leaves.size(); ++leaf) {
    for (int agent = 0; agent < n; ++agent) {
      const auto& subset = part.leaves[leaf].subsets[agent];
      const int m = static_cast<int>(subset.size());
      if (m < 2) continue;
      // Proper subsets containing the smallest value, one per unordered
      // 2-block split, in ascending mask order.
      for (std::uint64_t mask = 0; mask + 1 < (1ULL << (m - 1)); ++mask) {
        PartitionMove move;
        move.kind = PartitionMove::Kind::Split;
        move.leaf = static_cast<int>(leaf);
        move.agent = agent;
        move.block.push_back(subset[0]);
        for (int b = 0; b < m - 1; ++b) {
          if (mask >> b & 1) move.block.push_back(subset[b + 1]);
        }
        // Both halves must keep positive mass to stay valid leaves.
        Hyperrectangle half = part.leaves[leaf];
        half.subsets[agent] = move.block;
        const double block_mass = rect_prob(s, half);
        if (!(block_mass > 0.0) ||
            !(part.masses[leaf] - block_mass > 0.0)) {
          continue;
        }
        moves.push_back(std::move(move));
      }
    }
  }

  if (mode == NeighborMode::SplitMerge) {
    for (std::size_t i = 0; i < part.leaves.size(); ++i) {
      for (std::size_t j = i + 1; j < part.leaves.size(); ++j) {
        int differing = -1;
        bool mergeable = true;
        for (int a = 0; a < n && mergeable; ++a) {
          if (part.leaves[i].subsets[a] == part.leaves[j].subsets[a]) continue;
          if (differing >= 0) {
            mergeable = false;
          } else {
            differing = a;
          }
        }
        if (!mergeable || differing < 0) continue;
        PartitionMove move;
        move.kind = PartitionMove::Kind::Merge;
        move.leaf = static_cast<int>(i);
        move.other_leaf = static_cast<int>(j);
        move.agent = differing;
        moves.push_back(std::move(move));
      }
    }
  }
  return moves;
}

ProtocolPartition apply_move(const InformationStructure& s,
                             const ProtocolPartition& part,
                             const PartitionMove& move) {
  std::vector<Hyperrectangle> leaves = part.leaves;
  if (move.kind == PartitionMove::Kind::Split) {
    Hyperrectangle base = leaves[move.leaf];
    Hyperrectangle lo = base;
    lo.subsets[move.agent] = move.block;
    Hyperrectangle hi = base;
    std::vector<int> rest;
    std::set_difference(base.subsets[move.agent].begin(),
                        base.subsets[move.agent].end(), move.block.begin(),
                        move.block.end(), std::back_inserter(rest));
    if (rest.empty()) throw DomainError("split block must be proper");
    hi.subsets[move.agent] = std::move(rest);
    leaves[move.leaf] = std::move(lo);
    leaves.push_back(std::move(hi));
  } else {
    Hyperrectangle merged = leaves[move.leaf];
    merged.subsets[move.agent].clear();
    std::set_union(part.leaves[move.leaf].subsets[move.agent].begin(),
                   part.leaves[move.leaf].subsets[move.agent].end(),
                   part.leaves[move.other_leaf].subsets[move.agent].begin(),
                   part.leaves[move.other_leaf].subsets[move.agent].end(),
                   std::back_inserter(merged.subsets[move.agent]));
    leaves[move.leaf] = std::move(merged);
    leaves.erase(leaves.begin() + move.other_leaf);
  }
  return make_partition(s, std::move(leaves));
}

std::vector<ProtocolPartition> neighbors(const InformationStructure& s,
                                         const ProtocolPartition& part,
                                         NeighborMode mode) {
  std::vector<ProtocolPartition> out;
  for (const PartitionMove& move : enumerate_moves(s, part, mode)) {
    out.push_back(apply_move(s, part, move));
  }
  return out;
}

namespace {

SearchStep metrics_step(const InformationStructure& s,
                        const ProtocolPartition& part, double beta,
                        std::optional<PartitionMove> move) {
  SearchStep step;
  step.move = std::move(move);
  step.accuracy = accuracy_bits(s, part);
  step.cost = info_cost_bits(s, part);
  step.objective = step.accuracy - beta * step.cost;
  step.leaf_count = part.leaf_count();
  return step;
}

}  // namespace

SearchResult local_search(const InformationStructure& s, double beta,
                          const ProtocolPartition& start, std::uint64_t seed,
                          std::size_t max_steps) {
  (void)seed;
  SearchResult result;
  result.partition = start;
  result.trace.push_back(metrics_step(s, result.partition, beta, std::nullopt));

  for (std::size_t iter = 0;; ++iter) {
    if (iter >= max_steps) throw GuardError("local search step guard exceeded");
    const double current =
        objective_bits(s, result.partition, beta);
    std::optional<PartitionMove> best_move;
    ProtocolPartition best_part;
    double best_objective = current;
    for (const PartitionMove& move :
         enumerate_moves(s, result.partition, NeighborMode::SplitMerge)) {
      ProtocolPartition candidate = apply_move(s, result.partition, move);
      const double objective = objective_bits(s, candidate, beta);
      if (objective > best_objective + 1e-12) {  // first-best tie-break
        best_objective = objective;
        best_move = move;
        best_part = std::move(candidate);
      }
    }
    if (!best_move) break;
    result.partition = std::move(best_part);
    result.trace.push_back(
        metrics_step(s, result.partition, beta, std::move(best_move)));
  }
  return result;
}

LocalOptimumReport is_local_optimum(const InformationStructure& s, double beta,
                                    const ProtocolPartition& part,
                                    NeighborMode mode) {
  LocalOptimumReport report;
  const double current = objective_bits(s, part, beta);
  report.best_delta = 0.0;
  for (const PartitionMove& move : enumerate_moves(s, part, mode)) {
    const double objective = objective_bits(s, apply_move(s, part, move), beta);
    const double delta = objective - current;
    if (delta > report.best_delta + 1e-12) {  // first-best tie-break
      report.best_delta = delta;
      report.best_move = move;
    }
  }
  report.is_local_optimum = !report.best_move.has_value();
  return report;
}

Protocol partition_protocol(const InformationStructure& s,
                            const ProtocolPartition& part, double beta) {
  Protocol p;
  p.order.random = false;
  int total_values = 0;
  for (int i = 0; i < s.agent_count(); ++i) {
    p.order.sequence.push_back(i);
    total_values += s.signal_space_size(i);
  }
  p.max_rounds = s.agent_count() * (total_values + 1) + 1;
  p.beta = beta;
  for (int i = 0; i < s.agent_count(); ++i) {
    Policy policy;
    policy.kind = Policy::Kind::TargetPartition;
    policy.target_leaves = part.leaves;
    // Stop only on the no-progress rule; the information-based vote would
    // cut refinement of zero-information directions short.
    policy.stop_tolerance = -1.0;
    p.policies.push_back(std::move(policy));
  }

  const ProtocolPartition replay = partition_from_protocol(s, p);
  if (replay.leaves != part.leaves) {
    throw DomainError(
        "partition is not realizable by a deterministic protocol");
  }
  return p;
}

}  // namespace comlab
