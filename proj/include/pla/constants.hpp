#ifndef PLA_CONSTANTS_HPP_
#define PLA_CONSTANTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>

#include "pla/core.hpp"

namespace pla
{

/// log base 4/3.
inline double log43(double x) {return std::log(x) / std::log(4.0 / 3.0);}

/// Round a count up, ignoring floating-point fuzz just above an integer.
inline long ceil_count(double x)
{
  return static_cast<long>(std::ceil(x - 1e-9));
}

/**
 * @brief Confidence constants shared by every agent.
 *
 * delta_K = sqrt(2 ln(48 (2mn+1) T / eps)) * max(p_max, gamma_max) * I_max
 * n_0     = ceil(6 (log_{4/3} T + C_check)),  C_check = log_{4/3} p_max + 1
 */
struct TheoremConstants
{
  double horizon = 0.0;
  double epsilon = 0.05;
  double delta_K = 0.0;
  long n_0 = 0;
  double C_check = 0.0;
  double L_W = 0.0;
};

/// Conservative Lipschitz bound of the optimistic cost in the price.
inline double default_lipschitz(const MarketParams & market)
{
  return market.I_max * (1.0 + market.p_max) +
         static_cast<double>(market.n) * market.b_max * market.p_max;
}

inline TheoremConstants theorem_constants(
  const MarketParams & market, double horizon, double epsilon,
  std::optional<double> L_W_override = std::nullopt)
{
  TheoremConstants k;
  k.horizon = horizon;
  k.epsilon = epsilon;
  const double mn = static_cast<double>(market.m * market.n);
  k.delta_K = std::sqrt(2.0 * std::log(48.0 * (2.0 * mn + 1.0) * horizon / epsilon)) *
    std::max(market.p_max, market.gamma_max) * market.I_max;
  k.C_check = log43(market.p_max) + 1.0;
  k.n_0 = ceil_count(6.0 * (log43(horizon) + k.C_check));
  k.L_W = L_W_override.value_or(default_lipschitz(market));
  return k;
}

/// Periods after which no agent may still carry an infinite error bar.
inline double burn_in_periods(const MarketParams & market, const TheoremConstants & k)
{
  return 6.0 * static_cast<double>(market.interval_count()) *
         (log43(k.horizon) + k.C_check);
}

}  // namespace pla

#endif  // PLA_CONSTANTS_HPP_
