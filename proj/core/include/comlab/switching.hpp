#ifndef COMLAB_SWITCHING_HPP
#define COMLAB_SWITCHING_HPP

#include <cstdint>
#include <optional>

#include "comlab/consensus.hpp"
#include "comlab/structure.hpp"

namespace comlab {

// Cost in bits of switching h to h' by forgetting to hat and re-perceiving:
// log2(1/Pr[h|hat]) + log2(1/Pr[h'|hat]). Requires hat to contain both.
double switching_cost_via(const InformationStructure& s,
                          const Hyperrectangle& h, const Hyperrectangle& h_prime,
                          const Hyperrectangle& hat);

struct SwitchReport {
  Hyperrectangle h, h_prime;
  Hyperrectangle best_hat;
  double cost_bits = 0.0;
  double ell_lower_bound_bits = 0.0;  // ell(Pr[h'|h], Pr[h|h'])
  double tv = 0.0;                    // TV(q_h, q_{h'})
  // min{2(1 - 2^-b), sqrt(2^{b+1} g)}; filled by switch_divergence_bound.
  std::optional<double> bound_applied;
};

// Minimal switching cost over every rectangle containing both histories.
// Ties broken by smallest hat mass, then lexicographic rectangle order.
SwitchReport min_switching_cost(
    const InformationStructure& s, const Hyperrectangle& h,
    const Hyperrectangle& h_prime,
    std::uint64_t guard = rectangle_enumeration_guard);

// ell(p, q) = log2((1 + p/q - p)(1 + q/p - q)) for p, q in (0, 1]; a zero
// overlap yields +infinity.
double ell_bound(double p, double q);

struct SwitchDivergenceVerdict {
  double cost_bits = 0.0;      // b = minimal switching cost
  double gestalt_bits = 0.0;   // g(theta, x, eps)
  double bound = 0.0;          // min{2(1 - 2^-b), sqrt(2^{b+1} g)}
  double tv = 0.0;
  bool bound_holds = false;
  SwitchReport report;
};

// Checks TV(q_h, q_{h'}) against the cheap-switch divergence bound.
// Preconditions: both histories are eps-consensus and contain x, and the
// minimal switching cost is at most 1 bit.
SwitchDivergenceVerdict switch_divergence_bound(
    const InformationStructure& s, const Stimulus& x, const Hyperrectangle& h,
    const Hyperrectangle& h_prime, double epsilon,
    std::uint64_t guard = rectangle_enumeration_guard);

}  // namespace comlab

#endif
