#include "comlab/lmsr.hpp"

#include <algorithm>
#include <cmath>

namespace comlab {

namespace {

void check_state(const MarketState& state) {
  if (!(state.alpha > 0.0)) throw DomainError("liquidity must be positive");
  if (state.shares.empty()) throw DomainError("market has no outcomes");
}

}  // namespace

OutcomeDistribution lmsr_price(const MarketState& state) {
  check_state(state);
  const double m = *std::max_element(state.shares.begin(), state.shares.end());
  OutcomeDistribution p;
  p.probs.resize(state.shares.size());
  double z = 0.0;
  for (std::size_t i = 0; i < state.shares.size(); ++i) {
    p.probs[i] = std::exp((state.shares[i] - m) / state.alpha);
    z += p.probs[i];
  }
  for (double& v : p.probs) v /= z;
  return p;
}

double lmsr_cost(const MarketState& state) {
  check_state(state);
  const double m = *std::max_element(state.shares.begin(), state.shares.end());
  double z = 0.0;
  for (double s : state.shares) z += std::exp((s - m) / state.alpha);
  return m + state.alpha * std::log(z);
}

TradeRecord execute_trade(MarketState& state, std::span<const double> target,
                          int trader) {
  check_state(state);
  if (target.size() != state.shares.size()) {
    throw DomainError("share vector arity mismatch");
  }
  TradeRecord trade;
  trade.trader = trader;
  trade.alpha = state.alpha;
  trade.s_before = state.shares;
  trade.s_after.assign(target.begin(), target.end());
  const double before = lmsr_cost(state);
  state.shares = trade.s_after;
  trade.cash_cost = lmsr_cost(state) - before;
  return trade;
}

TradeRecord execute_trade_to_price(MarketState& state,
                                   const OutcomeDistribution& target,
                                   int trader) {
  check_state(state);
  if (target.size() != state.shares.size()) {
    throw DomainError("price vector arity mismatch");
  }
  for (double p : target.probs) {
    if (!(p > 0.0) || !(p < 1.0)) {
      throw DomainError("target price must be strictly inside the simplex");
    }
  }
  const std::size_t ref = state.shares.size() - 1;
  const double kappa =
      state.shares[ref] - state.alpha * std::log(target.probs[ref]);
  std::vector<double> shares(state.shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    shares[i] = state.alpha * std::log(target.probs[i]) + kappa;
  }
  return execute_trade(state, shares, trader);
}

double trade_payout(const TradeRecord& trade, int outcome) {
  return trade.s_after[outcome] - trade.s_before[outcome];
}

double net_reward(const TradeRecord& trade, int outcome) {
  return trade_payout(trade, outcome) - trade.cash_cost;
}

}  // namespace comlab
