#ifndef COMLAB_MARKET_HPP
#define COMLAB_MARKET_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "comlab/lmsr.hpp"
#include "comlab/structure.hpp"

namespace comlab {

// Trading behavior of one market participant holding a private signal.
//  - Silent:   never trades.
//  - Truthful: after `delay` of its own turns, trades the price to its
//              posterior given the public record and its signal, every turn.
//  - Reveal:   like Truthful but also announces the raw signal publicly
//              (needed under complements, where prices alone transmit
//              nothing).
struct Strategy {
  enum class Kind { Silent, Truthful, Reveal };
  Kind kind = Kind::Truthful;
  int delay = 0;

  std::string label() const;
};

struct TraderSpec {
  int agent = 0;
  Strategy strategy;
};

enum class SettlementMode { Expectation, Sampled };

struct MarketTrade {
  int turn = 0;
  int trader_index = -1;
  TradeRecord record;
  OutcomeDistribution price_after;
  bool announced = false;
  bool price_clipped = false;      // boundary belief clipped to the simplex
  bool inversion_flagged = false;  // non-identifiable move observed
};

struct MarketSession {
  std::vector<MarketTrade> trades;
  OutcomeDistribution final_price;
  Hyperrectangle final_public_rect;
  std::vector<double> profits;  // per trader; realized or expected
  int settled_outcome = -1;     // -1 in expectation mode
  std::uint64_t seed = 0;
  bool any_inversion_flagged = false;
};

// Turn-based LMSR session. The public record is the trade history; traders
// invert each other's moves exactly (strategies are common knowledge), so a
// truthful turn refines the public rectangle by the speaker's posterior
// partition even when the price does not move. The market opens at the
// prior, which must be interior.
MarketSession run_market_session(const InformationStructure& s,
                                 const Stimulus& x,
                                 const std::vector<TraderSpec>& traders,
                                 double alpha, std::uint64_t seed,
                                 SettlementMode mode, int max_turns = 64);

// Observer-side inversion of a truthful price move: the block of signal
// values whose posterior matches the observed price. A non-identifiable
// move falls back to the coarsest consistent inference (no refinement).
struct InversionResult {
  std::vector<int> block;
  bool identifiable = true;
};
InversionResult invert_truthful_move(const InformationStructure& s,
                                     const Hyperrectangle& h_pub, int agent,
                                     const OutcomeDistribution& observed);

// Exact expected net reward (nats) per trader for every strategy pair on a
// two-trader structure, averaged over the stimulus distribution. Prices
// follow exact posteriors, so boundary beliefs need no clipping.
struct TimingTable {
  std::vector<Strategy> grid;
  // profits[i][j] = expected (trader 1, trader 2) profit when trader 1
  // plays grid[i] and trader 2 plays grid[j].
  std::vector<std::vector<std::array<double, 2>>> profits;
};

TimingTable evaluate_strategy_timing(const InformationStructure& s,
                                     double alpha,
                                     const std::vector<Strategy>& grid);

std::vector<Strategy> default_timing_grid();

// Liquidity sweep with budget-limited traders: each trader announces its
// signal on its first turn and then moves shares toward the posterior
// target, at most `share_cap` per coordinate per trade.
struct LiquidityRow {
  double alpha = 0.0;
  int convergence_turn = -1;  // first turn with TV(price, q_x) <= tol
  double max_tv_jump = 0.0;   // largest single-trade price move
  int turns_executed = 0;
};

std::vector<LiquidityRow> liquidity_sweep(const InformationStructure& s,
                                          const Stimulus& x,
                                          const std::vector<double>& alphas,
                                          double share_cap, double tol = 1e-6,
                                          int max_turns = 4096);

}  // namespace comlab

#endif
