#ifndef COMLAB_COMPLEXITY_HPP
#define COMLAB_COMPLEXITY_HPP

#include <cstdint>
#include <vector>

#include "comlab/consensus.hpp"
#include "comlab/structure.hpp"

namespace comlab {

// Regret of an epsilon-consensus history. Throws DomainError when (s, h) is
// not an epsilon-consensus.
double gestalt_history(const InformationStructure& s, const Hyperrectangle& h,
                       double epsilon);

struct GestaltResult {
  double bits = 0.0;
  Hyperrectangle maximizer;  // lexicographically smallest among ties
};

// Worst-case regret over epsilon-consensus rectangles containing x.
GestaltResult gestalt_stimulus(const InformationStructure& s, const Stimulus& x,
                               double epsilon,
                               std::uint64_t guard = rectangle_enumeration_guard,
                               int threads = 1);

// Worst-case regret over all epsilon-consensus rectangles of the structure.
GestaltResult gestalt_structure(const InformationStructure& s, double epsilon,
                                std::uint64_t guard = rectangle_enumeration_guard,
                                int threads = 1);

// Product structure: agents of a then b, outcome space Omega_a x Omega_b,
// weights and outcome tables multiply. Combined labels join with '.'.
InformationStructure direct_sum(const InformationStructure& a,
                                const InformationStructure& b);

// Rectangle over the direct sum from per-part rectangles.
Hyperrectangle direct_sum_rect(const Hyperrectangle& ha,
                               const Hyperrectangle& hb);

struct MultistabilityWitness {
  Hyperrectangle h, h_prime;
  OutcomeDistribution belief, belief_prime;
  double tv = 0.0;
  double overlap_prime_given_h = 0.0;  // Pr[h' | h]
  double overlap_h_given_prime = 0.0;  // Pr[h | h']
  double epsilon = 0.0;
  double d = 0.0;
};

// All unordered pairs of epsilon-consensus rectangles containing x whose
// global beliefs are at least d apart in total variation, sorted by
// descending tv (ties by rectangle order).
std::vector<MultistabilityWitness> detect_multistability(
    const InformationStructure& s, const Stimulus& x, double epsilon, double d,
    std::uint64_t guard = rectangle_enumeration_guard, int threads = 1);

// Evaluates the overlap conditions under which two consensus rectangles
// must agree: the regret form min{2 max(regret)/d^2, 1 - d/2} and the
// substitutes form 2 n epsilon / d^2. Reports whether each hypothesis holds
// and whether the conclusion TV < d holds.
struct MonostabilityCertificate {
  double overlap_prime_given_h = 0.0;
  double overlap_h_given_prime = 0.0;
  double regret_h = 0.0;
  double regret_h_prime = 0.0;
  double regret_threshold = 0.0;      // min{2 max(regret)/d^2, 1 - d/2}
  double substitutes_threshold = 0.0; // 2 n eps / d^2
  bool regret_hypothesis_holds = false;
  bool substitutes_hypothesis_holds = false;
  double tv = 0.0;
  bool conclusion_holds = false;  // tv < d
};

MonostabilityCertificate monostability_certificate(
    const InformationStructure& s, const Stimulus& x, const Hyperrectangle& h,
    const Hyperrectangle& h_prime, double epsilon, double d);

}  // namespace comlab

#endif
