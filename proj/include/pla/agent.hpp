#ifndef PLA_AGENT_HPP_
#define PLA_AGENT_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pla/constants.hpp"
#include "pla/core.hpp"
#include "pla/environment.hpp"
#include "pla/intervals.hpp"
#include "pla/saa.hpp"

namespace pla
{

/// Weight of the error bar in the lower confidence bound.
inline constexpr double kLcbWidth = 34.0;

/// Quarter-point slots, in storage order.
enum Quarter : std::size_t { kA = 0, kC = 1, kB = 2 };

struct QuarterPoint
{
  double price = 0.0;
  Inventory play;       ///< inventory proposed at this price next sub-epoch
  double q_hat = kNaN;  ///< last sub-epoch's minimized average cost
};

/**
 * @brief Learning state of the agent attached to one price interval.
 *
 * Stage 1 shrinks the bracket [L, U] by a quarter per epoch using doubling
 * sub-epochs at its three quarter points. Stage 2 collects complementary
 * samples at the chosen price, Stage 3 exploits it. W_hat and Delta form the
 * error bar reported to the meta strategy (Delta = inf until first set).
 */
struct AgentState
{
  PriceInterval interval;
  int stage = 1;

  double L = 0.0;
  double U = 0.0;
  int tau = 1;  ///< epoch
  int s = 1;    ///< sub-epoch within the epoch
  std::array<QuarterPoint, 3> points;
  int completed_epochs = 0;

  double W_hat = 0.0;
  double Delta = kInf;
  long T_K = 0;

  double p_star = kNaN;
  Inventory I_star;
  long N2 = 0;
  int r_K = 0;

  double Q_star = kNaN;
  long N3 = 0;

  double lcb() const noexcept
  {
    return std::isinf(Delta) ? -kInf : W_hat - kLcbWidth * Delta;
  }
};

/// Read-only inputs every agent operation needs.
struct AgentContext
{
  const MarketParams & market;
  const TheoremConstants & constants;
  long horizon = 0;

  double min_width() const {return 1.0 / static_cast<double>(horizon);}
};

inline void set_quarter_prices(AgentState & st)
{
  st.points[kA].price = 0.75 * st.L + 0.25 * st.U;
  st.points[kC].price = 0.5 * st.L + 0.5 * st.U;
  st.points[kB].price = 0.25 * st.L + 0.75 * st.U;
}

/// Sampling order of the quarter points within a sub-epoch.
inline constexpr std::array<Quarter, 3> kPlayOrder{kA, kB, kC};

/**
 * @brief Creates agent K and spends its three probe periods.
 *
 * Each quarter point is probed once with the all-ones inventory and its
 * inventory for the first sub-epoch is fitted to that single observation.
 * Intervals narrower than 1/T go straight to Stage 2 at their midpoint.
 */
inline AgentState agent_init(const PriceInterval & interval, const AgentContext & ctx,
  Simulator & sim)
{
  AgentState st;
  st.interval = interval;
  st.L = interval.lo;
  st.U = interval.hi;
  set_quarter_prices(st);
  const Inventory probe = probe_inventory(ctx.market);
  for (auto q : kPlayOrder) {
    auto & pt = st.points[q];
    pt.play = probe;
    const auto obs = sim.play(probe, pt.price);
    if (!obs) {
      return st;
    }
    ++st.T_K;
    AggregatedCost agg;
    agg.p = pt.price;
    agg.add(obs->D);
    pt.play = saa_argmin_inventory(ctx.market, agg).I;
  }
  if (interval.width() < ctx.min_width()) {
    st.p_star = interval.mid();
    st.I_star = st.points[kC].play;
    st.stage = 2;
  }
  return st;
}

struct DispatchResult
{
  long periods = 0;
  bool completed = true;  ///< false when the horizon cut the dispatch short
};

/**
 * @brief One Stage-1 sub-epoch: n_s = 2^s periods at each quarter point.
 *
 * After sampling, applies the separation tests with threshold 4 Delta_s,
 * Delta_s = delta_K / (2 sqrt(n_s)). A separation shrinks the bracket by one
 * quarter and starts the next epoch without touching (W_hat, Delta); no
 * separation may tighten (W_hat, Delta) and moves on to sub-epoch s + 1.
 */
inline DispatchResult stage1_run_subepoch(AgentState & st, const AgentContext & ctx,
  Simulator & sim)
{
  DispatchResult out;
  const long n_s = 1L << st.s;
  std::array<InventoryFit, 3> fits;
  for (auto q : kPlayOrder) {
    auto & pt = st.points[q];
    AggregatedCost agg;
    agg.p = pt.price;
    for (long k = 0; k < n_s; ++k) {
      const auto obs = sim.play(pt.play, pt.price);
      if (!obs) {
        out.completed = false;
        st.T_K += out.periods;
        return out;
      }
      ++out.periods;
      agg.add(obs->D);
    }
    fits[q] = saa_argmin_inventory(ctx.market, agg);
  }
  st.T_K += out.periods;

  const double delta_s = ctx.constants.delta_K / (2.0 * std::sqrt(static_cast<double>(n_s)));
  const double qa = fits[kA].value, qc = fits[kC].value, qb = fits[kB].value;
  for (auto q : {kA, kC, kB}) {
    st.points[q].play = fits[q].I;
    st.points[q].q_hat = fits[q].value;
  }

  const double old_L = st.L, old_U = st.U;
  const double a = st.points[kA].price, b = st.points[kB].price;
  bool separated = true;
  if (qa > qb + 4.0 * delta_s) {
    st.L = a;
  } else if (qa < qb - 4.0 * delta_s) {
    st.U = b;
  } else if (qc < qa - 4.0 * delta_s) {
    st.L = a;
  } else if (qc < qb - 4.0 * delta_s) {
    st.U = b;
  } else {
    separated = false;
  }

  if (!separated) {
    if (delta_s < st.Delta) {
      st.Delta = delta_s;
      st.W_hat = std::min({qa, qc, qb});
    }
    ++st.s;
    return out;
  }

  ++st.completed_epochs;
  if (st.U - st.L > ctx.min_width()) {
    // Warm start each new quarter point from the nearest old one.
    const auto old = st.points;
    ++st.tau;
    st.s = 1;
    set_quarter_prices(st);
    for (auto & pt : st.points) {
      const QuarterPoint * nearest = &old[0];
      for (const auto & cand : old) {
        if (std::abs(cand.price - pt.price) < std::abs(nearest->price - pt.price)) {
          nearest = &cand;
        }
      }
      pt.play = nearest->play;
      pt.q_hat = kNaN;
    }
  } else {
    st.p_star = 0.5 * (old_L + old_U);
    st.I_star = fits[kC].I;
    st.stage = 2;
  }
  return out;
}

/// Stage-2 sample budget: 4 delta^2 / Delta^2, or n_0 while Delta is infinite.
inline long stage2_budget(const AgentState & st, const TheoremConstants & k)
{
  if (std::isinf(st.Delta)) {
    return k.n_0;
  }
  return ceil_count(4.0 * k.delta_K * k.delta_K / (st.Delta * st.Delta));
}

/**
 * @brief Stage 2 to completion: doubling batches 2, 4, ..., 2^{r_K} at p_star.
 *
 * The inventory is refitted to all Stage-2 samples after each batch. On
 * completion W_hat = Q_star - L_W / T, Delta = delta_K / sqrt(N2), stage 3.
 */
inline DispatchResult stage2_run(AgentState & st, const AgentContext & ctx, Simulator & sim)
{
  DispatchResult out;
  const long N2 = stage2_budget(st, ctx.constants);
  const int r_K = std::max(1, static_cast<int>(ceil_count(std::log2(static_cast<double>(N2)))));
  AggregatedCost agg;
  agg.p = st.p_star;
  Inventory I = st.I_star;
  InventoryFit fit;
  for (int r = 1; r <= r_K; ++r) {
    const long m_r = 1L << r;
    for (long k = 0; k < m_r; ++k) {
      const auto obs = sim.play(I, st.p_star);
      if (!obs) {
        out.completed = false;
        st.T_K += out.periods;
        return out;
      }
      ++out.periods;
      agg.add(obs->D);
    }
    fit = saa_argmin_inventory(ctx.market, agg);
    I = fit.I;
  }
  st.T_K += out.periods;
  st.N2 = N2;
  st.r_K = r_K;
  st.I_star = I;
  st.Q_star = fit.value;
  st.N3 = N2;
  st.W_hat = st.Q_star - ctx.constants.L_W / static_cast<double>(ctx.horizon);
  st.Delta = ctx.constants.delta_K / std::sqrt(static_cast<double>(N2));
  st.stage = 3;
  return out;
}

/// One exploitation period at (I_star, p_star), folded into the running mean.
inline DispatchResult stage3_step(AgentState & st, const AgentContext & ctx, Simulator & sim)
{
  DispatchResult out;
  const auto obs = sim.play(st.I_star, st.p_star);
  if (!obs) {
    out.completed = false;
    return out;
  }
  out.periods = 1;
  ++st.T_K;
  const double n = static_cast<double>(st.N3);
  st.Q_star = (n * st.Q_star + obs->cost) / (n + 1.0);
  ++st.N3;
  st.W_hat = st.Q_star - ctx.constants.L_W / static_cast<double>(ctx.horizon);
  st.Delta = ctx.constants.delta_K / std::sqrt(static_cast<double>(st.N3));
  return out;
}

}  // namespace pla

#endif  // PLA_AGENT_HPP_
