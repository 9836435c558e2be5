#ifndef PLA_PLA_HPP_
#define PLA_PLA_HPP_

#include "pla/core.hpp"
#include "pla/rng.hpp"
#include "pla/lp.hpp"
#include "pla/transport.hpp"
#include "pla/vertex_oracle.hpp"
#include "pla/constants.hpp"
#include "pla/environment.hpp"
#include "pla/intervals.hpp"
#include "pla/saa.hpp"
#include "pla/step_log.hpp"
#include "pla/agent.hpp"
#include "pla/config.hpp"
#include "pla/meta.hpp"
#include "pla/regret.hpp"
#include "pla/baseline.hpp"
#include "pla/csv.hpp"
#include "pla/checks.hpp"

#endif  // PLA_PLA_HPP_
