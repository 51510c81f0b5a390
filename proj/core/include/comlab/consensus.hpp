#ifndef COMLAB_CONSENSUS_HPP
#define COMLAB_CONSENSUS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "comlab/structure.hpp"

namespace comlab {

inline constexpr std::uint64_t rectangle_enumeration_guard = 10'000'000;
inline constexpr std::uint64_t partition_enumeration_guard = 1'000'000;

// A partition of one agent's restricted signal set into message blocks.
// Mutual information and entropy of a message function depend only on the
// induced partition, so enumerating partitions covers all deterministic
// policies (see docs/partition-reduction.md).
struct MessagePartition {
  std::vector<std::vector<int>> blocks;  // ordered by smallest element
};

struct ConsensusReport {
  bool is_consensus = false;
  std::vector<double> per_agent_mi;  // I(X_i; W | h) in bits
  double epsilon = 0.0;
};

// Checks I(X_i; W | h) <= epsilon for every agent. Comparisons allow the
// global norm_tolerance of float slack so exact-zero consensus is decidable.
ConsensusReport is_epsilon_consensus(const InformationStructure& s,
                                     const Hyperrectangle& h, double epsilon);

struct ConsensusRectangle {
  Hyperrectangle rect;
  double mass = 0.0;
  OutcomeDistribution belief;
  double regret = 0.0;
  std::vector<double> per_agent_mi;
};

// Every positive-mass rectangle that is epsilon-consensus, in lexicographic
// rectangle order. Throws GuardError when the product of per-axis subset
// counts exceeds the guard.
std::vector<ConsensusRectangle> enumerate_consensus_rectangles(
    const InformationStructure& s, double epsilon,
    std::uint64_t guard = rectangle_enumeration_guard, int threads = 1);

// Same enumeration restricted to rectangles containing x.
std::vector<ConsensusRectangle> enumerate_consensus_rectangles_containing(
    const InformationStructure& s, const Stimulus& x, double epsilon,
    std::uint64_t guard = rectangle_enumeration_guard, int threads = 1);

struct Deviation {
  int agent = -1;
  MessagePartition partition;
  double utility = 0.0;  // I(P(X_i);W|h) - beta * H(P(X_i)|h), bits
};

struct EquilibriumReport {
  bool is_equilibrium = false;
  double beta = 0.0;
  // The utility-maximizing deviation (lexicographically smallest among
  // ties); present whenever some agent has |B_i| > 1.
  std::optional<Deviation> worst_deviation;
};

// Beta-equilibrium: no agent has a message partition of B_i whose
// information value exceeds beta times its entropy cost. Enumeration is
// exhaustive over set partitions; throws GuardError when Bell(|B_i|)
// exceeds the per-agent guard.
EquilibriumReport is_beta_equilibrium(
    const InformationStructure& s, const Hyperrectangle& h, double beta,
    std::uint64_t guard = partition_enumeration_guard);

// Inverse of the binary entropy on (0, 0.5]: the x <= 0.5 with H_b(x) = eps
// (bits), found by bisection on [1e-12, 0.5] to absolute tolerance 1e-12.
double binary_entropy_inverse(double eps);

// b(eps) = (1/16) eps^2 / log2(1/E^{-1}(eps)) for eps in (0, 1]. Any
// beta-equilibrium with beta <= b(eps) is an eps-consensus.
double b_of_epsilon(double eps);

}  // namespace comlab

#endif
