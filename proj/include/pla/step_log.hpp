#ifndef PLA_STEP_LOG_HPP_
#define PLA_STEP_LOG_HPP_

#include <cstddef>
#include <vector>

#include "pla/core.hpp"

namespace pla
{

/// Stage value logged for the three initialization probes of each agent.
inline constexpr int kInitStage = 0;

/// One played period.
struct StepLog
{
  long t = 0;                 ///< 1-based period
  std::size_t agent = 0;      ///< dispatched agent (interval index)
  int stage = kInitStage;     ///< agent stage at dispatch, 0 for init probes
  double price = 0.0;
  Inventory I;
  DemandVector D;
  Matrix X;
  double realized_cost = 0.0;
  double expected_cost = kNaN;  ///< Q(I_t, p_t), filled in by compute_regret
  double regret = kNaN;         ///< expected_cost - W*
  std::vector<double> lcb;      ///< LCB of every agent when the period started

  friend bool operator==(const StepLog &, const StepLog &) = default;
};

}  // namespace pla

#endif  // PLA_STEP_LOG_HPP_
