#ifndef PLA_REGRET_HPP_
#define PLA_REGRET_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pla/core.hpp"
#include "pla/environment.hpp"
#include "pla/saa.hpp"
#include "pla/step_log.hpp"

namespace pla
{

struct RegretSeries
{
  std::uint64_t replication = 0;
  std::vector<double> instantaneous;  ///< Q(I_t, p_t) - W*, index t - 1
  std::vector<double> cumulative;     ///< Reg(t), index t - 1
  double slope = kNaN;

  double final_regret() const {return cumulative.empty() ? 0.0 : cumulative.back();}
};

/**
 * @brief Expected-cost regret of a logged decision sequence.
 *
 * Charges Q(I_t, p_t) (exact expectation over the noise atoms) against the
 * oracle optimum W*, and writes both into the logs.
 */
inline RegretSeries compute_regret(std::vector<StepLog> & logs, const MarketParams & market,
  const DemandModel & model, const OracleResult & oracle)
{
  if (!model.finite_support()) {
    throw std::invalid_argument(
            "compute_regret: exact regret needs finite-support noise (use an empirical oracle)");
  }
  RegretSeries series;
  series.instantaneous.reserve(logs.size());
  series.cumulative.reserve(logs.size());
  std::map<std::pair<double, Inventory>, double> cache;
  double total = 0.0;
  for (auto & log : logs) {
    const auto key = std::make_pair(log.price, log.I);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, exact_Q(market, model, log.I, log.price)).first;
    }
    log.expected_cost = it->second;
    log.regret = log.expected_cost - oracle.W_star;
    total += log.regret;
    series.instantaneous.push_back(log.regret);
    series.cumulative.push_back(total);
  }
  return series;
}

/// Cumulative sum of an instantaneous regret slice.
inline std::vector<double> cumulative_sum(const std::vector<double> & inst)
{
  std::vector<double> out(inst.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    acc += inst[k];
    out[k] = acc;
  }
  return out;
}

struct SlopeFit
{
  double slope = kNaN;
  std::size_t points = 0;
  std::string diagnostic;

  bool ok() const {return !std::isnan(slope);}
};

/**
 * @brief Least-squares slope of ln Reg(t) against ln t over t in [lo, hi].
 *
 * `cumulative[t - 1]` is Reg(t). Points with Reg(t) <= 0 are skipped; fewer
 * than two usable points yields NaN with a diagnostic.
 */
inline SlopeFit fit_slope(const std::vector<double> & cumulative, long lo, long hi)
{
  SlopeFit fit;
  lo = std::max(1L, lo);
  hi = std::min(static_cast<long>(cumulative.size()), hi);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t k = 0;
  for (long t = lo; t <= hi; ++t) {
    const double r = cumulative[static_cast<std::size_t>(t - 1)];
    if (!(r > 0.0)) {
      continue;
    }
    const double x = std::log(static_cast<double>(t)), y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  fit.points = k;
  if (k < 2) {
    fit.diagnostic = "fewer than two positive regret values in window [" +
      std::to_string(lo) + ", " + std::to_string(hi) + "]";
    return fit;
  }
  const double n = static_cast<double>(k);
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) {
    fit.diagnostic = "degenerate window";
    return fit;
  }
  fit.slope = (n * sxy - sx * sy) / denom;
  return fit;
}

}  // namespace pla

#endif  // PLA_REGRET_HPP_
