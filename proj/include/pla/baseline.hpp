#ifndef PLA_BASELINE_HPP_
#define PLA_BASELINE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pla/config.hpp"
#include "pla/constants.hpp"
#include "pla/environment.hpp"
#include "pla/meta.hpp"
#include "pla/saa.hpp"

namespace pla
{

/// Number of grid arms ceil(T^{1/3}) used by the comparator by default.
inline std::size_t default_grid_size(long horizon)
{
  return static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(horizon)) - 1e-9));
}

inline std::vector<double> grid_prices(double p_max, std::size_t G)
{
  std::vector<double> prices;
  if (G == 1) {
    prices.push_back(0.5 * p_max);
    return prices;
  }
  for (std::size_t g = 0; g < G; ++g) {
    prices.push_back(p_max * static_cast<double>(g) / static_cast<double>(G - 1));
  }
  return prices;
}

/**
 * @brief Grid bandit comparator over G equally spaced prices.
 *
 * Each arm keeps the mean realized cost of its plays and proposes the
 * inventory fitted to the demand seen at its price (refitted whenever the
 * arm's play count reaches a power of two). Plays the arm with the
 * smallest index mean - delta_K / sqrt(count); unplayed arms go first.
 * The StepLog agent field holds the arm, lcb the index vector.
 */
inline std::vector<StepLog> baseline_ucb_grid(const MarketParams & market,
  const DemandModel & model, long horizon, double delta_K, std::size_t G, std::uint64_t seed)
{
  struct Arm
  {
    double price;
    AggregatedCost seen;
    Inventory play;
    double mean = 0.0;
    long count = 0;
  };
  std::vector<Arm> arms;
  for (double p : grid_prices(market.p_max, G)) {
    Arm arm{p, {}, probe_inventory(market)};
    arm.seen.p = p;
    arms.push_back(std::move(arm));
  }
  Simulator sim(market, model, horizon, seed);
  std::vector<double> index(arms.size(), -kInf);
  while (!sim.exhausted()) {
    const std::size_t k = select_agent(std::span<const double>(index));
    auto & arm = arms[k];
    sim.set_context(k, 1, index);
    const auto obs = sim.play(arm.play, arm.price);
    ++arm.count;
    arm.mean += (obs->cost - arm.mean) / static_cast<double>(arm.count);
    arm.seen.add(obs->D);
    if ((arm.count & (arm.count - 1)) == 0) {  // refit on a doubling schedule
      arm.play = saa_argmin_inventory(market, arm.seen).I;
    }
    index[k] = arm.mean - delta_K / std::sqrt(static_cast<double>(arm.count));
  }
  return sim.take_logs();
}

inline std::vector<StepLog> baseline_ucb_grid(const ExperimentConfig & cfg, std::size_t G,
  std::uint64_t seed)
{
  return baseline_ucb_grid(cfg.market, cfg.demand, cfg.horizon, theorem_constants(cfg).delta_K,
    G, seed);
}

}  // namespace pla

#endif  // PLA_BASELINE_HPP_
