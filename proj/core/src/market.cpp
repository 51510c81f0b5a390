#include "comlab/market.hpp"

#include <algorithm>
#include <cmath>

#include "comlab/protocol.hpp"

namespace comlab {

std::string Strategy::label() const {
  std::string base;
  switch (kind) {
    case Kind::Silent:
      return "silent";
    case Kind::Truthful:
      base = "truthful";
      break;
    case Kind::Reveal:
      base = "reveal";
      break;
  }
  if (delay > 0) base += "+" + std::to_string(delay);
  return base;
}

namespace {

constexpr double price_floor = 1e-9;

double sup_diff(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i) {
    d = std::max(d, std::abs(a.probs[i] - b.probs[i]));
  }
  return d;
}

OutcomeDistribution clip_interior(const OutcomeDistribution& q,
                                  bool* clipped) {
  OutcomeDistribution out = q;
  bool any = false;
  double z = 0.0;
  for (double& v : out.probs) {
    if (v < price_floor) {
      v = price_floor;
      any = true;
    }
    z += v;
  }
  for (double& v : out.probs) v /= z;
  if (clipped) *clipped = any;
  return out;
}

std::vector<int> invert_exact(const InformationStructure& s,
                              const Hyperrectangle& h_pub, int agent,
                              const OutcomeDistribution& mine) {
  const AgentSlice slice = agent_slice(s, h_pub, agent);
  std::vector<int> block;
  for (std::size_t i = 0; i < slice.values.size(); ++i) {
    if (slice.mass[i] > 0.0 && sup_diff(slice.posterior[i], mine) <= 1e-12) {
      block.push_back(slice.values[i]);
    }
  }
  return block;
}

// Shared turn loop: exact-posterior price path with common-knowledge
// inversion. on_move(turn, trader_index, price_before, price_after,
// announced) fires for every price move and for announcement-only turns.
template <class Fn>
void run_turns(const InformationStructure& s, const Stimulus& x,
               const std::vector<TraderSpec>& traders, Hyperrectangle& h_pub,
               OutcomeDistribution& price, int max_turns, Fn&& on_move) {
  const int k = static_cast<int>(traders.size());
  std::vector<int> own_turns(k, 0);
  int idle_streak = 0;
  int turn = 0;
  while (turn < max_turns) {
    bool all_active = true;
    for (int i = 0; i < k; ++i) {
      const Strategy& st = traders[i].strategy;
      if (st.kind != Strategy::Kind::Silent && own_turns[i] <= st.delay) {
        all_active = false;
        break;
      }
    }
    if (all_active && idle_streak >= k) break;

    ++turn;
    const int ti = (turn - 1) % k;
    const TraderSpec& spec = traders[ti];
    bool progressed = false;
    if (spec.strategy.kind != Strategy::Kind::Silent &&
        own_turns[ti] >= spec.strategy.delay) {
      const int agent = spec.agent;
      bool announced = false;
      if (spec.strategy.kind == Strategy::Kind::Reveal &&
          h_pub.subsets[agent].size() > 1) {
        h_pub.subsets[agent] = {x.values[agent]};
        announced = true;
        progressed = true;
      }
      const OutcomeDistribution mine =
          posterior_local(s, h_pub, agent, x.values[agent]);
      if (spec.strategy.kind == Strategy::Kind::Truthful) {
        // Observers can replicate every value's would-be move, so even a
        // still price refines the public rectangle to the matching block.
        auto block = invert_exact(s, h_pub, agent, mine);
        if (!block.empty() && block.size() < h_pub.subsets[agent].size()) {
          h_pub.subsets[agent] = std::move(block);
          progressed = true;
        }
      }
      if (sup_diff(mine, price) > 1e-12) {
        const OutcomeDistribution before = price;
        price = mine;
        on_move(turn, ti, before, price, announced);
        progressed = true;
      } else if (announced) {
        on_move(turn, ti, price, price, announced);
      }
    }
    own_turns[ti]++;
    idle_streak = progressed ? 0 : idle_streak + 1;
  }
}

}  // namespace

InversionResult invert_truthful_move(const InformationStructure& s,
                                     const Hyperrectangle& h_pub, int agent,
                                     const OutcomeDistribution& observed) {
  const AgentSlice slice = agent_slice(s, h_pub, agent);
  InversionResult out;
  for (std::size_t i = 0; i < slice.values.size(); ++i) {
    if (slice.mass[i] <= 0.0) continue;
    bool clipped = false;
    const OutcomeDistribution shadow = clip_interior(slice.posterior[i], &clipped);
    if (sup_diff(slice.posterior[i], observed) <= 1e-9 ||
        sup_diff(shadow, observed) <= 1e-9) {
      out.block.push_back(slice.values[i]);
    }
  }
  if (out.block.empty()) {
    // Coarsest consistent inference: the move identifies nothing.
    out.identifiable = false;
    for (std::size_t i = 0; i < slice.values.size(); ++i) {
      if (slice.mass[i] > 0.0) out.block.push_back(slice.values[i]);
    }
  }
  return out;
}

MarketSession run_market_session(const InformationStructure& s,
                                 const Stimulus& x,
                                 const std::vector<TraderSpec>& traders,
                                 double alpha, std::uint64_t seed,
                                 SettlementMode mode, int max_turns) {
  if (traders.empty()) throw DomainError("session needs at least one trader");
  if (!(alpha > 0.0)) throw DomainError("liquidity must be positive");
  if (!(s.cell_weight(x.values) > 0.0)) {
    throw DomainError("stimulus has zero probability");
  }

  const OutcomeDistribution prior = posterior_global(s, s.full_space());
  for (double p : prior.probs) {
    if (!(p > 0.0)) {
      throw DomainError("market requires an interior prior over outcomes");
    }
  }
  MarketState state;
  state.alpha = alpha;
  state.shares.resize(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) {
    state.shares[i] = alpha * std::log(prior.probs[i]);
  }

  MarketSession session;
  session.seed = seed;
  Hyperrectangle h_pub = s.full_space();
  OutcomeDistribution price = prior;

  run_turns(s, x, traders, h_pub, price, max_turns,
            [&](int turn, int ti, const OutcomeDistribution&,
                const OutcomeDistribution& after, bool announced) {
              MarketTrade trade;
              trade.turn = turn;
              trade.trader_index = ti;
              trade.announced = announced;
              const OutcomeDistribution target =
                  clip_interior(after, &trade.price_clipped);
              trade.record = execute_trade_to_price(state, target, ti);
              trade.price_after = lmsr_price(state);
              session.trades.push_back(std::move(trade));
            });

  session.final_price = lmsr_price(state);
  session.final_public_rect = h_pub;
  session.profits.assign(traders.size(), 0.0);
  const OutcomeDistribution truth = posterior_ground_truth(s, x);
  if (mode == SettlementMode::Sampled) {
    session.settled_outcome = draw_outcome(s, x, seed);
    for (const auto& t : session.trades) {
      session.profits[t.trader_index] +=
          net_reward(t.record, session.settled_outcome);
    }
  } else {
    for (const auto& t : session.trades) {
      double expected = 0.0;
      for (int w = 0; w < s.outcome_count(); ++w) {
        if (truth.probs[w] > 0.0) {
          expected += truth.probs[w] * net_reward(t.record, w);
        }
      }
      session.profits[t.trader_index] += expected;
    }
  }
  return session;
}

TimingTable evaluate_strategy_timing(const InformationStructure& s,
                                     double alpha,
                                     const std::vector<Strategy>& grid) {
  if (s.agent_count() != 2) {
    throw DomainError("strategy timing tables require 2-agent structures");
  }
  if (!(alpha > 0.0)) throw DomainError("liquidity must be positive");

  TimingTable table;
  table.grid = grid;
  table.profits.assign(grid.size(),
                       std::vector<std::array<double, 2>>(
                           grid.size(), {0.0, 0.0}));

  const std::vector<Stimulus> stimuli = positive_stimuli(s);
  const OutcomeDistribution prior = posterior_global(s, s.full_space());

  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::array<double, 2> profit{0.0, 0.0};
      for (const Stimulus& x : stimuli) {
        const double w = s.cell_weight(x.values);
        const OutcomeDistribution truth = posterior_ground_truth(s, x);
        std::vector<TraderSpec> traders{{0, grid[i]}, {1, grid[j]}};
        Hyperrectangle h_pub = s.full_space();
        OutcomeDistribution price = prior;
        run_turns(s, x, traders, h_pub, price, 64,
                  [&](int, int ti, const OutcomeDistribution& before,
                      const OutcomeDistribution& after, bool) {
                    double gain = 0.0;
                    for (int k = 0; k < s.outcome_count(); ++k) {
                      if (truth.probs[k] > 0.0) {
                        gain += truth.probs[k] *
                                (std::log(after.probs[k]) -
                                 std::log(before.probs[k]));
                      }
                    }
                    profit[ti] += w * alpha * gain;
                  });
      }
      table.profits[i][j] = profit;
    }
  }
  return table;
}

std::vector<Strategy> default_timing_grid() {
  using K = Strategy::Kind;
  return {
      Strategy{K::Silent, 0},   Strategy{K::Truthful, 0},
      Strategy{K::Truthful, 1}, Strategy{K::Reveal, 0},
      Strategy{K::Reveal, 1},
  };
}

std::vector<LiquidityRow> liquidity_sweep(const InformationStructure& s,
                                          const Stimulus& x,
                                          const std::vector<double>& alphas,
                                          double share_cap, double tol,
                                          int max_turns) {
  if (!(share_cap > 0.0)) throw DomainError("share cap must be positive");
  if (!(s.cell_weight(x.values) > 0.0)) {
    throw DomainError("stimulus has zero probability");
  }
  const OutcomeDistribution prior = posterior_global(s, s.full_space());
  for (double p : prior.probs) {
    if (!(p > 0.0)) {
      throw DomainError("market requires an interior prior over outcomes");
    }
  }
  const OutcomeDistribution truth = posterior_ground_truth(s, x);
  const int n = s.agent_count();

  std::vector<LiquidityRow> rows;
  for (double alpha : alphas) {
    if (!(alpha > 0.0)) throw DomainError("liquidity must be positive");
    MarketState state;
    state.alpha = alpha;
    state.shares.resize(prior.size());
    for (std::size_t i = 0; i < prior.size(); ++i) {
      state.shares[i] = alpha * std::log(prior.probs[i]);
    }
    Hyperrectangle h_pub = s.full_space();
    std::vector<bool> announced(n, false);

    LiquidityRow row;
    row.alpha = alpha;
    int idle_streak = 0;
    for (int turn = 1; turn <= max_turns; ++turn) {
      const int agent = (turn - 1) % n;
      if (!announced[agent]) {
        h_pub.subsets[agent] = {x.values[agent]};
        announced[agent] = true;
      }
      bool clipped = false;
      const OutcomeDistribution target =
          clip_interior(posterior_global(s, h_pub), &clipped);
      const std::size_t ref = state.shares.size() - 1;
      const double kappa =
          state.shares[ref] - alpha * std::log(target.probs[ref]);
      bool moved = false;
      std::vector<double> next = state.shares;
      for (std::size_t i = 0; i < next.size(); ++i) {
        const double want = alpha * std::log(target.probs[i]) + kappa;
        const double delta =
            std::clamp(want - state.shares[i], -share_cap, share_cap);
        if (std::abs(delta) > 1e-15) moved = true;
        next[i] = state.shares[i] + delta;
      }
      if (moved) {
        const OutcomeDistribution before = lmsr_price(state);
        execute_trade(state, next, agent);
        const OutcomeDistribution after = lmsr_price(state);
        row.max_tv_jump = std::max(row.max_tv_jump, tv_distance(before, after));
        idle_streak = 0;
      } else {
        ++idle_streak;
      }
      row.turns_executed = turn;
      if (row.convergence_turn < 0 &&
          tv_distance(lmsr_price(state), truth) <= tol) {
        row.convergence_turn = turn;
      }
      const bool all_announced =
          std::all_of(announced.begin(), announced.end(), [](bool b) { return b; });
      if (all_announced && (idle_streak >= n || row.convergence_turn >= 0)) {
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace comlab
