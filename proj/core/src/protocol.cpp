#include "comlab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "comlab/rng.hpp"

namespace comlab {

namespace {

// Union-find over value positions, for TargetPartition components.
struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> canonical_blocks(
    std::vector<std::vector<int>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

void check_blocks_cover(const std::vector<std::vector<int>>& blocks,
                        const std::vector<int>& subset) {
  std::vector<int> all;
  for (const auto& b : blocks) {
    if (b.empty()) throw DomainError("policy emitted an empty block");
    all.insert(all.end(), b.begin(), b.end());
  }
  std::sort(all.begin(), all.end());
  if (all != subset) {
    throw DomainError("policy blocks do not partition the agent's subset");
  }
}

}  // namespace

std::vector<std::vector<int>> Policy::message_blocks(
    const InformationStructure& s, const Hyperrectangle& h, int agent) const {
  const std::vector<int>& subset = h.subsets[agent];
  switch (kind) {
    case Kind::Silent:
      return {subset};
    case Kind::FullReveal: {
      std::vector<std::vector<int>> blocks;
      blocks.reserve(subset.size());
      for (int v : subset) blocks.push_back({v});
      return blocks;
    }
    case Kind::Threshold: {
      std::vector<int> above, below;
      const AgentSlice slice = agent_slice(s, h, agent);
      for (std::size_t i = 0; i < slice.values.size(); ++i) {
        bool in_above = false;
        if (slice.mass[i] > 0.0) {
          const double q = slice.posterior[i].probs[outcome];
          in_above = strict ? q > tau : q >= tau;
        }
        (in_above ? above : below).push_back(slice.values[i]);
      }
      std::vector<std::vector<int>> blocks;
      if (!below.empty()) blocks.push_back(std::move(below));
      if (!above.empty()) blocks.push_back(std::move(above));
      return canonical_blocks(std::move(blocks));
    }
    case Kind::PartitionTable: {
      for (const auto& entry : table) {
        if (entry.rect == h) {
          auto blocks = canonical_blocks(entry.blocks);
          check_blocks_cover(blocks, subset);
          return blocks;
        }
      }
      return {subset};  // no entry: stay silent
    }
    case Kind::TargetPartition: {
      // Finest partition of the subset that does not cut any leaf cylinder
      // inside h: values sharing a leaf (with nonempty intersection with h)
      // are grouped together.
      DisjointSet ds(static_cast<int>(subset.size()));
      std::vector<int> pos(s.signal_space_size(agent), -1);
      for (std::size_t i = 0; i < subset.size(); ++i) {
        pos[subset[i]] = static_cast<int>(i);
      }
      for (const auto& leaf : target_leaves) {
        if (!intersect(leaf, h)) continue;
        int first = -1;
        for (int v : leaf.subsets[agent]) {
          if (pos[v] < 0) continue;
          if (first < 0) {
            first = pos[v];
          } else {
            ds.unite(first, pos[v]);
          }
        }
      }
      std::vector<std::vector<int>> by_root(subset.size());
      for (std::size_t i = 0; i < subset.size(); ++i) {
        by_root[ds.find(static_cast<int>(i))].push_back(subset[i]);
      }
      std::vector<std::vector<int>> blocks;
      for (auto& b : by_root) {
        if (!b.empty()) blocks.push_back(std::move(b));
      }
      return canonical_blocks(std::move(blocks));
    }
  }
  throw DomainError("unknown policy kind");
}

namespace {

int speaker_for_round(const Protocol& p, int round, SplitMix64& rng) {
  if (p.order.random) {
    return static_cast<int>(
        rng.next_below(static_cast<std::uint64_t>(p.policies.size())));
  }
  if (p.order.sequence.empty()) {
    throw ValidationError("explicit speaker order is empty");
  }
  return p.order.sequence[(round - 1) % p.order.sequence.size()];
}

bool wants_stop(const InformationStructure& s, const Policy& policy,
                const Hyperrectangle& h, int agent, int value) {
  if (cond_mutual_info_signal(s, agent, h) <= policy.stop_tolerance) {
    return true;
  }
  // Nothing informative left to say: the next message would not refine h.
  const auto blocks = policy.message_blocks(s, h, agent);
  for (const auto& b : blocks) {
    if (std::binary_search(b.begin(), b.end(), value)) {
      return b.size() == h.subsets[agent].size();
    }
  }
  throw DomainError("policy blocks do not cover the realized signal");
}

bool all_stop(const InformationStructure& s, const Protocol& p,
              const Transcript& t, const Hyperrectangle& h) {
  for (int i = 0; i < s.agent_count(); ++i) {
    if (!wants_stop(s, p.policies[i], h, i, t.stimulus.values[i])) {
      return false;
    }
  }
  return true;
}

}  // namespace

Transcript begin_transcript(const InformationStructure& s, const Stimulus& x,
                            const Protocol& p) {
  if (static_cast<int>(p.policies.size()) != s.agent_count()) {
    throw ValidationError("protocol must define one policy per agent");
  }
  if (p.max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
  if (!(s.cell_weight(x.values) > 0.0)) {
    throw DomainError("stimulus has zero probability");
  }
  Transcript t;
  t.stimulus = x;
  t.initial_rect = s.full_space();
  t.prior = posterior_global(s, t.initial_rect);
  t.seed_used = p.order.seed;
  return t;
}

bool step(const InformationStructure& s, const Protocol& p, Transcript& t) {
  if (t.finished) return false;
  const Hyperrectangle& current =
      t.rounds.empty() ? t.initial_rect : t.rounds.back().rect;

  // Replays speaker selection from the seed so that a transcript extended
  // round by round matches a full run.
  SplitMix64 rng(p.order.seed);
  int speaker = -1;
  for (int r = 1; r <= static_cast<int>(t.rounds.size()) + 1; ++r) {
    speaker = speaker_for_round(p, r, rng);
  }

  const Policy& policy = p.policies[speaker];
  const auto blocks = policy.message_blocks(s, current, speaker);
  check_blocks_cover(blocks, current.subsets[speaker]);

  const int value = t.stimulus.values[speaker];
  const std::vector<int>* chosen = nullptr;
  for (const auto& b : blocks) {
    if (std::binary_search(b.begin(), b.end(), value)) {
      chosen = &b;
      break;
    }
  }
  if (chosen == nullptr) {
    throw DomainError("policy blocks do not cover the realized signal");
  }

  TranscriptRound round;
  round.round = static_cast<int>(t.rounds.size()) + 1;
  round.speaker = speaker;
  round.block = *chosen;
  round.rect = current;
  round.rect.subsets[speaker] = *chosen;
  round.belief = posterior_global(s, round.rect);

  const OutcomeDistribution& before =
      t.rounds.empty() ? t.prior : t.rounds.back().belief;
  round.reward_bits.resize(s.outcome_count());
  for (int w = 0; w < s.outcome_count(); ++w) {
    if (round.belief.probs[w] <= 0.0) {
      round.reward_bits[w] = -std::numeric_limits<double>::infinity();
    } else {
      round.reward_bits[w] =
          std::log2(round.belief.probs[w]) - std::log2(before.probs[w]);
    }
  }
  const double cond = rect_cond_prob(s, round.rect, current);
  round.cost_bits = p.beta * (-std::log2(cond));
  if (round.cost_bits == 0.0) round.cost_bits = 0.0;  // normalize -0

  t.rounds.push_back(std::move(round));

  if (all_stop(s, p, t, t.rounds.back().rect)) {
    t.finished = true;
    t.terminated_by = Termination::AllStop;
  } else if (static_cast<int>(t.rounds.size()) >= p.max_rounds) {
    t.finished = true;
    t.terminated_by = Termination::MaxRounds;
  }
  return true;
}

Transcript run_protocol(const InformationStructure& s, const Protocol& p,
                        const Stimulus& x) {
  Transcript t = begin_transcript(s, x, p);
  if (all_stop(s, p, t, t.initial_rect)) {
    t.finished = true;
    t.terminated_by = Termination::AllStop;
    return t;
  }
  while (!t.finished) step(s, p, t);
  return t;
}

double round_reward(const Transcript& t, int round, int outcome) {
  return t.rounds.at(static_cast<std::size_t>(round) - 1).reward_bits[outcome];
}

double round_cost(const Transcript& t, int round) {
  return t.rounds.at(static_cast<std::size_t>(round) - 1).cost_bits;
}

int draw_outcome(const InformationStructure& s, const Stimulus& x,
                 std::uint64_t seed) {
  const auto probs = s.cell_outcome_probs(x.values);
  SplitMix64 rng(seed);
  const double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t w = 0; w < probs.size(); ++w) {
    acc += probs[w];
    if (u < acc) return static_cast<int>(w);
  }
  return static_cast<int>(probs.size()) - 1;
}

std::vector<double> per_agent_realized_reward(const InformationStructure& s,
                                              const Transcript& t,
                                              int outcome) {
  std::vector<double> out(s.agent_count(), 0.0);
  for (const auto& r : t.rounds) out[r.speaker] += r.reward_bits[outcome];
  return out;
}

std::vector<double> per_agent_expected_reward(const InformationStructure& s,
                                              const Transcript& t) {
  const auto q = posterior_ground_truth(s, t.stimulus);
  std::vector<double> out(s.agent_count(), 0.0);
  for (const auto& r : t.rounds) {
    for (int w = 0; w < s.outcome_count(); ++w) {
      if (q.probs[w] > 0.0) out[r.speaker] += q.probs[w] * r.reward_bits[w];
    }
  }
  return out;
}

std::vector<Stimulus> positive_stimuli(const InformationStructure& s) {
  std::vector<Stimulus> out;
  s.for_each_cell_in(s.full_space(),
                     [&](std::span<const int> tuple, double w,
                         std::span<const double>) {
                       if (w > 0.0) {
                         out.push_back(
                             Stimulus{std::vector<int>(tuple.begin(), tuple.end())});
                       }
                     });
  return out;
}

DisagreementReport count_disagreements(const InformationStructure& s,
                                       const Protocol& p, double d,
                                       const std::vector<double>& deltas) {
  DisagreementReport report;
  report.d = d;
  report.stimuli = positive_stimuli(s);

  for (std::size_t k = 0; k < report.stimuli.size(); ++k) {
    const Stimulus& x = report.stimuli[k];
    Protocol local = p;
    if (p.order.random) local.order.seed = p.order.seed + k;  // reproducible
    const Transcript t = run_protocol(s, local, x);
    int count = 0;
    const OutcomeDistribution* prev = &t.prior;
    for (const auto& r : t.rounds) {
      if (tv_distance(*prev, r.belief) > d) ++count;
      prev = &r.belief;
    }
    report.masses.push_back(s.cell_weight(x.values));
    report.counts.push_back(count);
  }

  const double h_w = entropy_bits(posterior_global(s, s.full_space()));
  for (double delta : deltas) {
    // Smallest c with Pr[count <= c] >= 1 - delta under the stimulus
    // distribution.
    int maxc = 0;
    for (int c : report.counts) maxc = std::max(maxc, c);
    int quantile = maxc;
    for (int c = 0; c <= maxc; ++c) {
      double mass = 0.0;
      for (std::size_t k = 0; k < report.counts.size(); ++k) {
        if (report.counts[k] <= c) mass += report.masses[k];
      }
      if (mass >= 1.0 - delta - norm_tolerance) {
        quantile = c;
        break;
      }
    }
    report.quantiles.push_back(
        {delta, quantile, h_w / (2.0 * d * d * delta)});
  }
  return report;
}

}  // namespace comlab
