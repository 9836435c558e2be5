#ifndef PLA_SAA_HPP_
#define PLA_SAA_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "pla/core.hpp"
#include "pla/environment.hpp"
#include "pla/intervals.hpp"
#include "pla/lp.hpp"
#include "pla/rng.hpp"
#include "pla/transport.hpp"

namespace pla
{

struct WeightedDemand
{
  DemandVector D;
  double weight = 0.0;
};

/**
 * @brief Scenario-averaged cost at a fixed price.
 *
 * Evaluates <gamma, I> + sum_k (w_k / W) g(I, p, D_k) with W the total weight.
 */
struct AggregatedCost
{
  double p = 0.0;
  std::vector<WeightedDemand> scenarios;

  double total_weight() const
  {
    double w = 0.0;
    for (const auto & s : scenarios) {
      w += s.weight;
    }
    return w;
  }

  void add(const DemandVector & D, double weight = 1.0)
  {
    for (auto & s : scenarios) {
      if (s.D == D) {
        s.weight += weight;
        return;
      }
    }
    scenarios.push_back(WeightedDemand{D, weight});
  }
};

/// Scenarios of a history recorded at price p.
inline AggregatedCost aggregate(const ScenarioHistory & history, double p)
{
  AggregatedCost agg;
  agg.p = p;
  for (const auto & s : history.entries) {
    if (s.p == p) {
      agg.add(s.D, static_cast<double>(s.weight));
    }
  }
  return agg;
}

inline double aggregated_value(const MarketParams & market, const AggregatedCost & agg,
  const Inventory & I)
{
  const double W = agg.total_weight();
  double v = dot(market.gamma, I);
  for (const auto & s : agg.scenarios) {
    v += s.weight / W * allocation_value(I, s.D, agg.p, market.C);
  }
  return v;
}

struct InventoryFit
{
  Inventory I;
  double value = 0.0;         ///< aggregated cost re-evaluated at I
  double lp_objective = 0.0;  ///< objective reported by the solver route
};

namespace detail
{

// One LP over I and one allocation block per scenario.
inline InventoryFit saa_extensive(const MarketParams & market, const AggregatedCost & agg)
{
  const std::size_t m = market.m, n = market.n, mn = m * n;
  const std::size_t K = agg.scenarios.size();
  const std::size_t vars = m + K * mn;
  const std::size_t rows = K * (m + n) + 1;
  const double W = agg.total_weight();

  lp::Problem prob;
  prob.A = Matrix(rows, vars);
  prob.b.assign(rows, 0.0);
  prob.c.assign(vars, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    prob.c[i] = market.gamma[i];
  }
  for (std::size_t k = 0; k < K; ++k) {
    const double w = agg.scenarios[k].weight / W;
    const std::size_t base = m + k * mn;
    const std::size_t row0 = k * (m + n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t col = base + i * n + j;
        prob.c[col] = w * (market.C(i, j) - agg.p);
        prob.A(row0 + i, col) = 1.0;
        prob.A(row0 + m + j, col) = 1.0;
      }
      prob.A(row0 + i, i) = -1.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      prob.b[row0 + m + j] = agg.scenarios[k].D[j];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    prob.A(rows - 1, i) = 1.0;
  }
  prob.b[rows - 1] = market.I_max;

  const auto sol = lp::solve(prob);
  if (sol.status != lp::Status::optimal) {
    throw std::runtime_error("saa_argmin_inventory: scenario LP not solved");
  }
  InventoryFit fit;
  fit.I.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
  fit.lp_objective = sol.objective;
  fit.value = aggregated_value(market, agg, fit.I);
  return fit;
}

// Kelley cutting planes on the inventory, with subgradients taken from the
// inventory multipliers of each scenario's allocation.
inline InventoryFit saa_cutting_plane(const MarketParams & market, const AggregatedCost & agg)
{
  const std::size_t m = market.m;
  const double W = agg.total_weight();
  // g >= -p sum(I) >= -p_max I_max, so theta - floor stays nonnegative.
  const double floor = -market.p_max * market.I_max - 1.0;

  struct Cut { std::vector<double> slope; double rhs; };
  std::vector<Cut> cuts;
  auto evaluate = [&](const Inventory & I, Cut & cut) {
      double G = 0.0;
      std::vector<double> s(m, 0.0);
      for (const auto & sc : agg.scenarios) {
        const auto res = solve_allocation(I, sc.D, agg.p, market.C);
        G += sc.weight / W * res.objective;
        for (std::size_t i = 0; i < m; ++i) {
          s[i] -= sc.weight / W * res.lambda[i];
        }
      }
      // theta >= G + s.(x - I)  <=>  s.x - theta' <= floor - G + s.I
      cut.slope = s;
      cut.rhs = floor - G + dot(s, I);
      return dot(market.gamma, I) + G;
    };

  InventoryFit best;
  best.I = Inventory(m, 0.0);
  Cut cut;
  best.value = evaluate(best.I, cut);
  cuts.push_back(cut);
  {
    const Inventory start = probe_inventory(market);
    const double v = evaluate(start, cut);
    cuts.push_back(cut);
    if (v < best.value) {
      best.I = start;
      best.value = v;
    }
  }

  for (int iter = 0; iter < 2000; ++iter) {
    lp::Problem master;
    const std::size_t rows = cuts.size() + 1;
    master.A = Matrix(rows, m + 1);
    master.b.assign(rows, 0.0);
    master.c.assign(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      master.c[i] = market.gamma[i];
      master.A(0, i) = 1.0;
    }
    master.c[m] = 1.0;
    master.b[0] = market.I_max;
    for (std::size_t r = 0; r < cuts.size(); ++r) {
      for (std::size_t i = 0; i < m; ++i) {
        master.A(r + 1, i) = cuts[r].slope[i];
      }
      master.A(r + 1, m) = -1.0;
      master.b[r + 1] = cuts[r].rhs;
    }
    const auto sol = lp::solve(master);
    if (sol.status != lp::Status::optimal) {
      throw std::runtime_error("saa_argmin_inventory: cutting-plane master not solved");
    }
    const double lower = sol.objective + floor;
    Inventory I(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
    const double v = evaluate(I, cut);
    if (v < best.value) {
      best.I = I;
      best.value = v;
    }
    best.lp_objective = lower;
    if (best.value - lower <= 1e-11 * (1.0 + std::abs(best.value))) {
      break;
    }
    cuts.push_back(cut);
  }
  return best;
}

}  // namespace detail

/// Scenario blocks above which the cutting-plane route replaces the single LP.
inline constexpr std::size_t kExtensiveBlockLimit = 24;

/**
 * @brief Minimizer of the scenario-averaged cost over {I >= 0, sum I <= I_max}.
 *
 * Few distinct scenarios: one LP with an allocation block per scenario.
 * Many (continuous noise): cutting planes on I using allocation duals.
 */
inline InventoryFit saa_argmin_inventory(const MarketParams & market, const AggregatedCost & agg)
{
  if (agg.scenarios.empty()) {
    throw std::invalid_argument("saa_argmin_inventory: no scenarios");
  }
  if (agg.scenarios.size() <= kExtensiveBlockLimit) {
    return detail::saa_extensive(market, agg);
  }
  return detail::saa_cutting_plane(market, agg);
}

inline InventoryFit saa_argmin_inventory_cutting_plane(
  const MarketParams & market, const AggregatedCost & agg)
{
  return detail::saa_cutting_plane(market, agg);
}

inline InventoryFit saa_argmin_inventory_extensive(
  const MarketParams & market, const AggregatedCost & agg)
{
  return detail::saa_extensive(market, agg);
}

/// The exact expected-cost scenarios at price p (finite-support noise only).
inline AggregatedCost expected_scenarios(const DemandModel & model, double p)
{
  const auto * fs = std::get_if<FiniteSupportNoise>(&model.noise);
  if (fs == nullptr) {
    throw std::invalid_argument("exact oracle needs finite-support noise");
  }
  AggregatedCost agg;
  agg.p = p;
  for (const auto & atom : fs->atoms) {
    if (atom.prob <= 0.0) {
      continue;
    }
    DemandVector D(model.a.size());
    for (std::size_t j = 0; j < D.size(); ++j) {
      D[j] = std::max(0.0, model.a[j] - model.b[j] * p + atom.offset[j]);
    }
    agg.add(D, atom.prob);
  }
  return agg;
}

/// Q(I, p) by enumerating the noise atoms.
inline double exact_Q(const MarketParams & market, const DemandModel & model,
  const Inventory & I, double p)
{
  return aggregated_value(market, expected_scenarios(model, p), I);
}

struct MonteCarloEstimate
{
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean of Q_t(I, p) with its standard error.
inline MonteCarloEstimate monte_carlo_Q(const MarketParams & market, const DemandModel & model,
  const Inventory & I, double p, std::size_t samples, Rng & rng)
{
  if (samples < 100) {
    throw std::invalid_argument("monte_carlo_Q: need at least 100 samples");
  }
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double q = realized_cost(market, I, p, sample_demand(model, p, rng));
    const double delta = q - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (q - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(std::max(0.0, var) / static_cast<double>(samples))};
}

/// W(p) = min_I Q(I, p) and a minimizing inventory.
inline InventoryFit exact_W(const MarketParams & market, const DemandModel & model, double p)
{
  return saa_argmin_inventory(market, expected_scenarios(model, p));
}

struct IntervalOptimum
{
  std::size_t K = 0;
  double lo = 0.0;
  double hi = 0.0;
  double p = 0.0;
  double W = 0.0;
  Inventory I;
};

struct OracleResult
{
  double p_star = 0.0;
  Inventory I_star;
  double W_star = 0.0;
  std::vector<IntervalOptimum> per_interval;
};

/**
 * @brief Golden-section minimum of a function assumed convex on [lo, hi].
 *
 * The endpoints are evaluated too, so minima on the boundary are exact.
 */
template<typename F>
std::pair<double, double> golden_section_min(F && f, double lo, double hi, double tol)
{
  const double fl = f(lo);
  if (!(hi > lo)) {
    return {lo, fl};
  }
  const double fh = f(hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  std::pair<double, double> best{lo, fl};
  for (auto cand : {std::pair{x1, f1}, std::pair{x2, f2}, std::pair{hi, fh}}) {
    if (cand.second < best.second) {
      best = cand;
    }
  }
  return best;
}

/// min over (I, p) of Q, interval by interval. Default tolerance 1e-6 p_max.
inline OracleResult global_optimum(const MarketParams & market, const DemandModel & model,
  double price_tol = -1.0)
{
  if (price_tol <= 0.0) {
    price_tol = 1e-6 * market.p_max;
  }
  const auto set = build_intervals(market.C, market.p_max);
  OracleResult res;
  res.W_star = kInf;
  for (const auto & iv : set.intervals) {
    auto W = [&](double p) {return exact_W(market, model, p).value;};
    const auto [p, value] = golden_section_min(W, iv.lo, iv.hi, price_tol);
    IntervalOptimum opt{iv.K, iv.lo, iv.hi, p, value, exact_W(market, model, p).I};
    if (value < res.W_star) {
      res.W_star = value;
      res.p_star = p;
      res.I_star = opt.I;
    }
    res.per_interval.push_back(std::move(opt));
  }
  return res;
}

}  // namespace pla

#endif  // PLA_SAA_HPP_
