#include "comlab/complexity.hpp"

#include <algorithm>
#include <cmath>

namespace comlab {

double gestalt_history(const InformationStructure& s, const Hyperrectangle& h,
                       double epsilon) {
  if (!is_epsilon_consensus(s, h, epsilon).is_consensus) {
    throw DomainError("history is not an epsilon-consensus");
  }
  return regret_bits(s, h);
}

namespace {

GestaltResult max_regret_of(std::vector<ConsensusRectangle>&& rects) {
  if (rects.empty()) {
    // Unreachable for positive-mass stimuli: singleton rectangles are
    // always 0-consensus.
    throw DomainError("no qualifying consensus rectangle");
  }
  GestaltResult out;
  out.bits = -1.0;
  for (auto& r : rects) {
    if (r.regret > out.bits) {  // strict: keeps first (lexicographic) tie
      out.bits = r.regret;
      out.maximizer = std::move(r.rect);
    }
  }
  return out;
}

}  // namespace

GestaltResult gestalt_stimulus(const InformationStructure& s, const Stimulus& x,
                               double epsilon, std::uint64_t guard,
                               int threads) {
  return max_regret_of(
      enumerate_consensus_rectangles_containing(s, x, epsilon, guard, threads));
}

GestaltResult gestalt_structure(const InformationStructure& s, double epsilon,
                                std::uint64_t guard, int threads) {
  return max_regret_of(
      enumerate_consensus_rectangles(s, epsilon, guard, threads));
}

InformationStructure direct_sum(const InformationStructure& a,
                                const InformationStructure& b) {
  RawStructure raw;
  raw.name = a.name().empty() || b.name().empty() ? std::string()
                                                  : a.name() + "+" + b.name();
  for (int i = 0; i < a.agent_count(); ++i) raw.agents.push_back(a.signal_labels(i));
  for (int i = 0; i < b.agent_count(); ++i) raw.agents.push_back(b.signal_labels(i));
  for (const auto& la : a.outcome_labels()) {
    for (const auto& lb : b.outcome_labels()) {
      raw.outcomes.push_back(la + "." + lb);
    }
  }

  const Hyperrectangle full_a = a.full_space();
  const Hyperrectangle full_b = b.full_space();
  a.for_each_cell_in(full_a, [&](std::span<const int> ta, double wa,
                                 std::span<const double> pa) {
    b.for_each_cell_in(full_b, [&](std::span<const int> tb, double wb,
                                   std::span<const double> pb) {
      RawCell cell;
      for (std::size_t i = 0; i < ta.size(); ++i) {
        cell.signals.push_back(a.signal_labels(static_cast<int>(i))[ta[i]]);
      }
      for (std::size_t i = 0; i < tb.size(); ++i) {
        cell.signals.push_back(b.signal_labels(static_cast<int>(i))[tb[i]]);
      }
      cell.weight = wa * wb;
      cell.outcome_probs.reserve(pa.size() * pb.size());
      for (double va : pa) {
        for (double vb : pb) cell.outcome_probs.push_back(va * vb);
      }
      // Zero-weight cells may carry an all-zero outcome row; give them a
      // uniform row so validation invariants hold uniformly.
      if (cell.weight <= 0.0) {
        double sum = 0.0;
        for (double v : cell.outcome_probs) sum += v;
        if (sum <= 0.0) {
          std::fill(cell.outcome_probs.begin(), cell.outcome_probs.end(),
                    1.0 / static_cast<double>(cell.outcome_probs.size()));
        }
      }
      raw.cells.push_back(std::move(cell));
    });
  });
  return validate_structure(raw);
}

Hyperrectangle direct_sum_rect(const Hyperrectangle& ha,
                               const Hyperrectangle& hb) {
  Hyperrectangle out = ha;
  out.subsets.insert(out.subsets.end(), hb.subsets.begin(), hb.subsets.end());
  return out;
}

std::vector<MultistabilityWitness> detect_multistability(
    const InformationStructure& s, const Stimulus& x, double epsilon, double d,
    std::uint64_t guard, int threads) {
  const auto rects =
      enumerate_consensus_rectangles_containing(s, x, epsilon, guard, threads);
  std::vector<MultistabilityWitness> out;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (std::size_t j = i + 1; j < rects.size(); ++j) {
      const double tv = tv_distance(rects[i].belief, rects[j].belief);
      if (tv < d) continue;
      MultistabilityWitness w;
      w.h = rects[i].rect;
      w.h_prime = rects[j].rect;
      w.belief = rects[i].belief;
      w.belief_prime = rects[j].belief;
      w.tv = tv;
      auto common = intersect(w.h, w.h_prime);
      const double inter_mass = common ? rect_prob(s, *common) : 0.0;
      w.overlap_prime_given_h = inter_mass / rects[i].mass;
      w.overlap_h_given_prime = inter_mass / rects[j].mass;
      w.epsilon = epsilon;
      w.d = d;
      out.push_back(std::move(w));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MultistabilityWitness& a,
                      const MultistabilityWitness& b) { return a.tv > b.tv; });
  return out;
}

MonostabilityCertificate monostability_certificate(
    const InformationStructure& s, const Stimulus& x, const Hyperrectangle& h,
    const Hyperrectangle& h_prime, double epsilon, double d) {
  if (!h.contains(x) || !h_prime.contains(x)) {
    throw DomainError("both rectangles must contain the stimulus");
  }
  if (!is_epsilon_consensus(s, h, epsilon).is_consensus ||
      !is_epsilon_consensus(s, h_prime, epsilon).is_consensus) {
    throw DomainError("both histories must be epsilon-consensus");
  }
  if (!(d > 0.0)) throw DomainError("d must be positive");

  MonostabilityCertificate cert;
  const double mass_h = rect_prob(s, h);
  const double mass_hp = rect_prob(s, h_prime);
  auto common = intersect(h, h_prime);
  const double inter_mass = common ? rect_prob(s, *common) : 0.0;
  cert.overlap_prime_given_h = inter_mass / mass_h;
  cert.overlap_h_given_prime = inter_mass / mass_hp;
  cert.regret_h = regret_bits(s, h);
  cert.regret_h_prime = regret_bits(s, h_prime);
  cert.regret_threshold =
      std::min(2.0 * std::max(cert.regret_h, cert.regret_h_prime) / (d * d),
               1.0 - d / 2.0);
  cert.substitutes_threshold =
      2.0 * static_cast<double>(s.agent_count()) * epsilon / (d * d);
  cert.regret_hypothesis_holds =
      cert.overlap_prime_given_h > cert.regret_threshold &&
      cert.overlap_h_given_prime > cert.regret_threshold;
  cert.substitutes_hypothesis_holds =
      cert.overlap_prime_given_h > cert.substitutes_threshold &&
      cert.overlap_h_given_prime > cert.substitutes_threshold;
  cert.tv =
      tv_distance(posterior_global(s, h), posterior_global(s, h_prime));
  cert.conclusion_holds = cert.tv < d;
  return cert;
}

}  // namespace comlab
