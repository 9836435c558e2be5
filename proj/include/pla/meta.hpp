#ifndef PLA_META_HPP_
#define PLA_META_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pla/agent.hpp"
#include "pla/config.hpp"
#include "pla/constants.hpp"
#include "pla/environment.hpp"
#include "pla/intervals.hpp"

namespace pla
{

struct MetaState
{
  long t = 0;
  std::vector<AgentState> agents;
  std::vector<double> lcb;

  void refresh_lcb()
  {
    lcb.resize(agents.size());
    for (std::size_t K = 0; K < agents.size(); ++K) {
      lcb[K] = agents[K].lcb();
    }
  }
};

/// Index of the smallest LCB; the lowest index wins ties.
inline std::size_t select_agent(std::span<const double> lcb)
{
  std::size_t best = 0;
  for (std::size_t K = 1; K < lcb.size(); ++K) {
    if (lcb[K] < lcb[best]) {
      best = K;
    }
  }
  return best;
}

inline std::size_t select_agent(const MetaState & state)
{
  return select_agent(std::span<const double>(state.lcb));
}

struct DispatchEvent
{
  std::size_t agent = 0;
  int stage_before = 0;
  DispatchResult result;
};

/// Called after every dispatch, once the LCBs are refreshed.
using MetaObserver = std::function<void(const MetaState &, const DispatchEvent &)>;

struct RunResult
{
  IntervalSet intervals;
  TheoremConstants constants;
  MetaState state;
  std::vector<StepLog> logs;
};

/**
 * @brief Runs the LCB meta strategy with explicit constants.
 *
 * Probes every agent three times, then repeatedly dispatches the agent with
 * the smallest LCB: one sub-epoch in Stage 1, all of Stage 2, one period in
 * Stage 3. A dispatch cut short by the horizon is logged but not learned from.
 */
inline RunResult run_with_constants(const MarketParams & market, const DemandModel & model,
  long horizon, const TheoremConstants & constants, std::uint64_t seed,
  const MetaObserver & observer = {})
{
  RunResult res;
  res.intervals = build_intervals(market.C, market.p_max);
  res.constants = constants;
  Simulator sim(market, model, horizon, seed);
  const AgentContext ctx{market, res.constants, horizon};
  auto & state = res.state;

  state.lcb.assign(res.intervals.intervals.size(), -kInf);
  for (const auto & iv : res.intervals.intervals) {
    if (sim.exhausted()) {
      break;
    }
    sim.set_context(iv.K, kInitStage, state.lcb);
    state.agents.push_back(agent_init(iv, ctx, sim));
  }
  // Agents never initialized (tiny horizons) keep LCB = -inf and are never run.
  if (state.agents.size() == res.intervals.intervals.size()) {
    state.refresh_lcb();
  }
  state.t = sim.clock();

  while (!sim.exhausted()) {
    const std::size_t K = select_agent(state);
    auto & agent = state.agents[K];
    DispatchEvent ev{K, agent.stage, {}};
    sim.set_context(K, agent.stage, state.lcb);
    switch (agent.stage) {
      case 1:
        ev.result = stage1_run_subepoch(agent, ctx, sim);
        break;
      case 2:
        ev.result = stage2_run(agent, ctx, sim);
        break;
      default:
        ev.result = stage3_step(agent, ctx, sim);
        break;
    }
    state.refresh_lcb();
    state.t = sim.clock();
    if (observer) {
      observer(state, ev);
    }
  }
  res.logs = sim.take_logs();
  return res;
}

inline RunResult run(const ExperimentConfig & cfg, std::uint64_t seed,
  const MetaObserver & observer = {})
{
  return run_with_constants(cfg.market, cfg.demand, cfg.horizon, theorem_constants(cfg), seed,
    observer);
}

inline RunResult run(const ExperimentConfig & cfg, const MetaObserver & observer = {})
{
  return run(cfg, cfg.seed, observer);
}

}  // namespace pla

#endif  // PLA_META_HPP_
