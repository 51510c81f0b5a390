#ifndef COMLAB_OPTIMIZE_HPP
#define COMLAB_OPTIMIZE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "comlab/protocol.hpp"
#include "comlab/structure.hpp"

namespace comlab {

// The partition of the stimulus space into final rectangles induced by a
// protocol. Leaves are disjoint positive-mass rectangles covering every
// positive-mass stimulus, kept in lexicographic order.
struct ProtocolPartition {
  std::vector<Hyperrectangle> leaves;
  std::vector<double> masses;
  std::vector<OutcomeDistribution> beliefs;

  std::size_t leaf_count() const { return leaves.size(); }
};

// Validates disjointness and coverage, sorts leaves, computes masses and
// beliefs. Throws ValidationError on overlap or uncovered positive mass.
ProtocolPartition make_partition(const InformationStructure& s,
                                 std::vector<Hyperrectangle> leaves);

ProtocolPartition trivial_partition(const InformationStructure& s);
ProtocolPartition full_reveal_partition(const InformationStructure& s);

// Runs the protocol on every positive-mass stimulus and collects the
// distinct final rectangles.
ProtocolPartition partition_from_protocol(const InformationStructure& s,
                                          const Protocol& p);

// v = I(final rectangle; W) in bits.
double accuracy_bits(const InformationStructure& s,
                     const ProtocolPartition& part);

// c = I(final rectangle; X) = H(final rectangle) in bits, since the leaf is
// a function of the stimulus.
double info_cost_bits(const InformationStructure& s,
                      const ProtocolPartition& part);

// v - beta * c.
double objective_bits(const InformationStructure& s,
                      const ProtocolPartition& part, double beta);

// Single-leaf single-agent moves: splitting one agent's subset at one leaf
// into two positive-mass blocks, or merging two leaves that differ only in
// one agent's subset.
struct PartitionMove {
  enum class Kind { Split, Merge };
  Kind kind = Kind::Split;
  int leaf = -1;
  int agent = -1;
  std::vector<int> block;  // split: the half containing the smallest value
  int other_leaf = -1;     // merge partner (> leaf)
};

// The equilibrium-to-local-optimum statement is certified under refinement
// moves only (an agent can reveal, not forget); search also uses merges.
enum class NeighborMode { RefineOnly, SplitMerge };

std::vector<PartitionMove> enumerate_moves(const InformationStructure& s,
                                           const ProtocolPartition& part,
                                           NeighborMode mode);

ProtocolPartition apply_move(const InformationStructure& s,
                             const ProtocolPartition& part,
                             const PartitionMove& move);

std::vector<ProtocolPartition> neighbors(const InformationStructure& s,
                                         const ProtocolPartition& part,
                                         NeighborMode mode);

struct SearchStep {
  std::optional<PartitionMove> move;  // empty for the starting row
  double objective = 0.0;
  double accuracy = 0.0;
  double cost = 0.0;
  std::size_t leaf_count = 0;
};

struct SearchResult {
  ProtocolPartition partition;
  std::vector<SearchStep> trace;
};

// Greedy hill climbing on the objective over SplitMerge neighbors; stops
// when no move improves by more than 1e-12. Ties go to the first move in
// the deterministic enumeration order, so the trajectory is reproducible;
// the seed is reserved for randomized starts and does not affect the ascent.
SearchResult local_search(const InformationStructure& s, double beta,
                          const ProtocolPartition& start,
                          std::uint64_t seed = 0,
                          std::size_t max_steps = 100'000);

struct LocalOptimumReport {
  bool is_local_optimum = false;
  std::optional<PartitionMove> best_move;  // best improving move if any
  double best_delta = 0.0;
};

LocalOptimumReport is_local_optimum(const InformationStructure& s, double beta,
                                    const ProtocolPartition& part,
                                    NeighborMode mode);

// Explicit protocol (fixed round-robin order, partition-refining policies)
// whose final rectangles reproduce the given leaves. Throws DomainError when
// the partition is not realizable by any deterministic protocol.
Protocol partition_protocol(const InformationStructure& s,
                            const ProtocolPartition& part, double beta = 1.0);

}  // namespace comlab

#endif
