#ifndef COMLAB_STRUCTURE_HPP
#define COMLAB_STRUCTURE_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "comlab/distribution.hpp"
#include "comlab/errors.hpp"

namespace comlab {

class InformationStructure;

// A realization of the agents' signals, as per-agent indices into the
// declared signal spaces.
struct Stimulus {
  std::vector<int> values;

  friend auto operator<=>(const Stimulus&, const Stimulus&) = default;
};

// Knowledge state "X_i in B_i for every agent i". Every history of a
// deterministic protocol has this form, so rectangles double as histories.
// Axis subsets are sorted, unique and nonempty; comparison is lexicographic.
struct Hyperrectangle {
  std::vector<std::vector<int>> subsets;

  bool contains(const Stimulus& x) const;
  bool contains(const Hyperrectangle& other) const;  // superset per axis
  bool is_cell() const;                              // all axes singleton

  friend auto operator<=>(const Hyperrectangle&, const Hyperrectangle&) =
      default;
};

// Intersection of two rectangles; std::nullopt when empty (an empty
// intersection is never represented as a rectangle).
std::optional<Hyperrectangle> intersect(const Hyperrectangle& a,
                                        const Hyperrectangle& b);

// Axis-wise union hull, the smallest rectangle containing both.
Hyperrectangle axis_union(const Hyperrectangle& a, const Hyperrectangle& b);

// Raw (unvalidated) structure description, as read from a scenario file.
struct RawCell {
  std::vector<std::string> signals;
  double weight = 0.0;
  std::vector<double> outcome_probs;
};

struct RawStructure {
  std::string name;
  std::vector<std::vector<std::string>> agents;  // per-agent signal labels
  std::vector<std::string> outcomes;
  std::vector<RawCell> cells;
};

// Exact joint distribution over n discrete signals and a discrete target.
// Cell weights are normalized to sum to 1; zero-weight cells are retained so
// the table always covers the full product space.
class InformationStructure {
 public:
  int agent_count() const { return static_cast<int>(signal_labels_.size()); }
  int signal_space_size(int agent) const {
    return static_cast<int>(signal_labels_[agent].size());
  }
  int outcome_count() const { return static_cast<int>(outcome_labels_.size()); }
  std::size_t cell_count() const { return weights_.size(); }

  const std::string& name() const { return name_; }
  const std::vector<std::string>& signal_labels(int agent) const {
    return signal_labels_[agent];
  }
  const std::vector<std::string>& outcome_labels() const {
    return outcome_labels_;
  }

  // Factor the raw weights were multiplied by to make them sum to 1.
  double normalization_factor() const { return normalization_factor_; }

  std::size_t cell_index(std::span<const int> tuple) const;
  double cell_weight(std::span<const int> tuple) const {
    return weights_[cell_index(tuple)];
  }
  std::span<const double> cell_outcome_probs(std::span<const int> tuple) const;

  Hyperrectangle full_space() const;

  // Index of a signal label / outcome label; throws ValidationError if absent.
  int signal_index(int agent, const std::string& label) const;
  int outcome_index(const std::string& label) const;

  // Calls fn(tuple, weight, outcome_probs) for every cell inside rect,
  // in lexicographic tuple order (zero-weight cells included).
  void for_each_cell_in(
      const Hyperrectangle& rect,
      const std::function<void(std::span<const int>, double,
                               std::span<const double>)>& fn) const;

  friend InformationStructure validate_structure(const RawStructure& raw);

 private:
  std::string name_;
  std::vector<std::vector<std::string>> signal_labels_;
  std::vector<std::string> outcome_labels_;
  std::vector<std::size_t> strides_;
  std::vector<double> weights_;        // cell_count entries
  std::vector<double> outcome_probs_;  // cell_count * outcome_count, row-major
  double normalization_factor_ = 1.0;
};

// Checks the table against the type invariants (complete product space, no
// duplicates, nonnegative weights, outcome rows summing to 1) and normalizes
// total weight to 1. Throws ValidationError naming the offending cell.
InformationStructure validate_structure(const RawStructure& raw);

// Probability mass of a rectangle.
double rect_prob(const InformationStructure& s, const Hyperrectangle& h);

// Pr[x in R_inner | x in R_outer]. Throws DomainError on a zero-mass outer.
double rect_cond_prob(const InformationStructure& s,
                      const Hyperrectangle& inner, const Hyperrectangle& outer);

// Posterior over the target given "x in R_h". Throws DomainError when the
// rectangle has zero mass.
OutcomeDistribution posterior_global(const InformationStructure& s,
                                     const Hyperrectangle& h);

// Posterior given h plus one agent's exact signal (B_i replaced by {value}).
OutcomeDistribution posterior_local(const InformationStructure& s,
                                    const Hyperrectangle& h, int agent,
                                    int value);

// Posterior given the full stimulus: the cell's outcome row.
OutcomeDistribution posterior_ground_truth(const InformationStructure& s,
                                           const Stimulus& x);

// I(X_agent; W | h) in bits: the mass-weighted average KL divergence of the
// agent's local beliefs from the global belief.
double cond_mutual_info_signal(const InformationStructure& s, int agent,
                               const Hyperrectangle& h);

// Regret I(X; W | h) in bits: information left unaggregated at h.
double regret_bits(const InformationStructure& s, const Hyperrectangle& h);

// Per-agent conditional slice of a rectangle: masses and posteriors of each
// signal value, used by the consensus and protocol machinery.
struct AgentSlice {
  std::vector<int> values;                       // B_agent, sorted
  std::vector<double> mass;                      // Pr[X_agent = v | h]
  std::vector<OutcomeDistribution> posterior;    // q_{h,v}; empty when mass 0
  OutcomeDistribution global;                    // q_h
  double rect_mass = 0.0;                        // Pr[h]
};

AgentSlice agent_slice(const InformationStructure& s, const Hyperrectangle& h,
                       int agent);

}  // namespace comlab

#endif
