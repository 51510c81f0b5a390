#ifndef COMLAB_PROTOCOL_HPP
#define COMLAB_PROTOCOL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "comlab/structure.hpp"

namespace comlab {

// Deterministic per-agent policy. A policy, applied to the current
// rectangle, induces a partition of the agent's restricted signal set; the
// emitted message is the block containing the realized signal.
struct Policy {
  enum class Kind {
    Silent,          // single block: never refines
    FullReveal,      // singleton blocks
    Threshold,       // two blocks split by the local belief in one outcome
    PartitionTable,  // explicit per-history mapping of B_i into blocks
    TargetPartition  // refine toward a fixed leaf partition of the space
  };

  Kind kind = Kind::Silent;

  // Threshold parameters: block membership is q_{h,v}(outcome) >= tau, or
  // strictly > tau when strict is set (the worked examples use both
  // conventions). Values with undefined local beliefs (zero conditional
  // mass) land in the complement block.
  double tau = 0.5;
  int outcome = 0;
  bool strict = false;

  // PartitionTable: entries matched by exact current rectangle; when no
  // entry matches the policy stays silent.
  struct TableEntry {
    Hyperrectangle rect;
    std::vector<std::vector<int>> blocks;
  };
  std::vector<TableEntry> table;

  // TargetPartition: leaves of the partition the policy refines toward.
  std::vector<Hyperrectangle> target_leaves;

  // Stop-vote tolerance: the agent votes stop when her conditional mutual
  // information given the current history is at most this, or when her next
  // message would not refine the rectangle.
  double stop_tolerance = 1e-9;

  // The induced partition of h.subsets[agent]; blocks ordered by smallest
  // element. Throws DomainError if a table entry's blocks do not partition
  // the current subset.
  std::vector<std::vector<int>> message_blocks(const InformationStructure& s,
                                               const Hyperrectangle& h,
                                               int agent) const;
};

// Speaker order: an explicit sequence (cycled when shorter than the run) or
// seeded uniform random selection each round.
struct SpeakerOrder {
  bool random = false;
  std::vector<int> sequence;
  std::uint64_t seed = 0;
};

struct Protocol {
  SpeakerOrder order;
  std::vector<Policy> policies;  // one per agent
  int max_rounds = 64;
  double beta = 1.0;
};

struct TranscriptRound {
  int round = 0;    // 1-based
  int speaker = 0;
  std::vector<int> block;            // message: block containing x_speaker
  Hyperrectangle rect;               // h^t
  OutcomeDistribution belief;        // q_{h^t}
  std::vector<double> reward_bits;   // per outcome; -inf when belief hits 0
  double cost_bits = 0.0;            // beta * log2(1 / Pr[h^t | h^{t-1}])
};

enum class Termination { AllStop, MaxRounds };

struct Transcript {
  Stimulus stimulus;
  Hyperrectangle initial_rect;       // h^0: the full space
  OutcomeDistribution prior;         // q_{h^0}
  std::vector<TranscriptRound> rounds;
  Termination terminated_by = Termination::AllStop;
  bool finished = false;
  std::uint64_t seed_used = 0;       // speaker-selection seed (random order)
};

// Starts an empty transcript at the full space.
Transcript begin_transcript(const InformationStructure& s, const Stimulus& x,
                            const Protocol& p);

// Executes one round: the scheduled speaker's policy is applied to
// (x_speaker, h^{t-1}), the rectangle refines to the block containing the
// speaker's signal, and beliefs/reward/cost are recorded. Returns false if
// the transcript had already finished. Stop votes are re-collected from all
// agents after the round.
bool step(const InformationStructure& s, const Protocol& p, Transcript& t);

// Runs step() until all agents stop or max_rounds is hit.
Transcript run_protocol(const InformationStructure& s, const Protocol& p,
                        const Stimulus& x);

// Accessors by 1-based round number.
double round_reward(const Transcript& t, int round, int outcome);
double round_cost(const Transcript& t, int round);

// Settlement helpers. Sampled mode draws the target from the stimulus
// cell's outcome row with a splitmix64 seed; expectation mode weights all
// outcomes exactly.
int draw_outcome(const InformationStructure& s, const Stimulus& x,
                 std::uint64_t seed);
std::vector<double> per_agent_realized_reward(const InformationStructure& s,
                                              const Transcript& t, int outcome);
std::vector<double> per_agent_expected_reward(const InformationStructure& s,
                                              const Transcript& t);

struct DisagreementReport {
  std::vector<Stimulus> stimuli;   // positive-mass stimuli, lexicographic
  std::vector<double> masses;
  std::vector<int> counts;         // rounds with TV(q_{h^t}, q_{h^{t+1}}) > d
  struct QuantileEntry {
    double delta = 0.0;
    int quantile = 0;     // smallest c with Pr[count <= c] >= 1 - delta
    double bound = 0.0;   // H(W) / (2 d^2 delta)
  };
  std::vector<QuantileEntry> quantiles;
  double d = 0.0;
};

// Runs the protocol on every positive-mass stimulus and counts belief jumps
// larger than d. Random-order protocols derive a per-stimulus seed from the
// protocol seed so the report is reproducible.
DisagreementReport count_disagreements(const InformationStructure& s,
                                       const Protocol& p, double d,
                                       const std::vector<double>& deltas);

// All positive-mass stimuli in lexicographic order.
std::vector<Stimulus> positive_stimuli(const InformationStructure& s);

}  // namespace comlab

#endif
