#ifndef COMLAB_LMSR_HPP
#define COMLAB_LMSR_HPP

#include <span>
#include <vector>

#include "comlab/distribution.hpp"
#include "comlab/errors.hpp"

namespace comlab {

// Logarithmic market scoring rule state. This module works in nats (natural
// logs), matching the exponential price map; 1 bit = ln 2 nats converts to
// the bit-based modules.
struct MarketState {
  std::vector<double> shares;  // s(omega)
  double alpha = 1.0;          // liquidity, > 0
};

// Softmax of s / alpha, stabilized by subtracting max(s); sums to 1 within
// norm_tolerance even for |s| up to 1e4.
OutcomeDistribution lmsr_price(const MarketState& state);

// C(s) = alpha * ln(sum_z e^{s(z)/alpha}), stabilized. The cost potential:
// a trade from s to s' costs C(s') - C(s), so path cost depends only on the
// endpoints.
double lmsr_cost(const MarketState& state);

struct TradeRecord {
  int trader = -1;
  std::vector<double> s_before, s_after;
  double alpha = 1.0;
  double cash_cost = 0.0;  // C(s_after) - C(s_before)
};

// Moves the state to the given share vector.
TradeRecord execute_trade(MarketState& state, std::span<const double> target,
                          int trader);

// Moves the state so prices equal target: s(omega) = alpha ln p(omega) + k,
// with k fixing the last coordinate. The target must be strictly inside the
// simplex (no 0 or 1 entries).
TradeRecord execute_trade_to_price(MarketState& state,
                                   const OutcomeDistribution& target,
                                   int trader);

// Settlement payout when W = omega: one unit per omega-share bought.
double trade_payout(const TradeRecord& trade, int outcome);

// payout - cash cost; equals alpha * (ln p_after(omega) - ln p_before(omega)).
double net_reward(const TradeRecord& trade, int outcome);

}  // namespace comlab

#endif
