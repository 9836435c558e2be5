#ifndef PLA_ENVIRONMENT_HPP_
#define PLA_ENVIRONMENT_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pla/core.hpp"
#include "pla/rng.hpp"
#include "pla/step_log.hpp"
#include "pla/transport.hpp"

namespace pla
{

/// One joint noise atom: an n-vector offset and its probability.
struct NoiseAtom
{
  std::vector<double> offset;
  double prob = 0.0;
};

struct FiniteSupportNoise
{
  std::vector<NoiseAtom> atoms;
};

/**
 * @brief Independent per-consumer Gaussian noise truncated to [lower, upper].
 *
 * Draws are re-centred by the analytic mean of the truncated law, so the
 * offset has mean zero and support [lower - shift, upper - shift].
 */
struct TruncatedGaussianNoise
{
  std::vector<double> sigma;
  std::vector<double> lower;
  std::vector<double> upper;
};

using NoiseSpec = std::variant<FiniteSupportNoise, TruncatedGaussianNoise>;

/// Hidden ground truth: D = a - b p + N.
struct DemandModel
{
  std::vector<double> a;
  std::vector<double> b;
  NoiseSpec noise;

  bool finite_support() const noexcept
  {
    return std::holds_alternative<FiniteSupportNoise>(noise);
  }
};

namespace detail
{

inline double normal_pdf(double x)
{
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

inline double normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace detail

/// Mean of N(0, sigma^2) conditioned on [lower, upper].
inline double truncated_gaussian_mean(double sigma, double lower, double upper)
{
  if (sigma <= 0.0) {
    return 0.0;
  }
  const double alpha = lower / sigma, beta = upper / sigma;
  const double mass = detail::normal_cdf(beta) - detail::normal_cdf(alpha);
  return sigma * (detail::normal_pdf(alpha) - detail::normal_pdf(beta)) / mass;
}

/// Smallest possible noise offset per consumer.
inline std::vector<double> min_noise_offset(const DemandModel & model)
{
  const std::size_t n = model.a.size();
  std::vector<double> lo(n, kInf);
  if (const auto * fs = std::get_if<FiniteSupportNoise>(&model.noise)) {
    for (const auto & atom : fs->atoms) {
      for (std::size_t j = 0; j < n && j < atom.offset.size(); ++j) {
        lo[j] = std::min(lo[j], atom.offset[j]);
      }
    }
  } else {
    const auto & tg = std::get<TruncatedGaussianNoise>(model.noise);
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = tg.sigma[j] > 0.0 ?
        tg.lower[j] - truncated_gaussian_mean(tg.sigma[j], tg.lower[j], tg.upper[j]) : 0.0;
    }
  }
  return lo;
}

/**
 * @brief Every violated model invariant, as "path: rule" strings.
 *
 * Checks bounds against the market, the zero-mean and unit-mass conditions of
 * finite-support noise, and that realized demand can never go negative on
 * [0, p_max].
 */
inline std::vector<std::string> demand_model_issues(
  const DemandModel & model, const MarketParams & market, const std::string & prefix = "demand")
{
  std::vector<std::string> issues;
  const std::size_t n = market.n;
  auto complain = [&](const std::string & path, const std::string & rule) {
      issues.push_back(prefix + "." + path + ": " + rule);
    };
  if (model.a.size() != n) {
    complain("a", "expected " + std::to_string(n) + " entries");
  }
  if (model.b.size() != n) {
    complain("b", "expected " + std::to_string(n) + " entries");
  }
  if (!issues.empty()) {
    return issues;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const std::string idx = "[" + std::to_string(j) + "]";
    if (!(model.a[j] >= 0.0)) {complain("a" + idx, "must be >= 0");}
    if (model.a[j] > market.a_max) {complain("a" + idx, "exceeds a_max");}
    if (!(model.b[j] >= 0.0)) {complain("b" + idx, "must be >= 0");}
    if (model.b[j] > market.b_max) {complain("b" + idx, "exceeds b_max");}
  }

  bool shape_ok = true;
  if (const auto * fs = std::get_if<FiniteSupportNoise>(&model.noise)) {
    if (fs->atoms.empty()) {
      complain("noise.atoms", "at least one atom required");
      return issues;
    }
    double mass = 0.0;
    std::vector<double> mean(n, 0.0);
    for (std::size_t k = 0; k < fs->atoms.size(); ++k) {
      const auto & atom = fs->atoms[k];
      const std::string path = "noise.atoms[" + std::to_string(k) + "]";
      if (atom.offset.size() != n) {
        complain(path + ".offset", "expected " + std::to_string(n) + " entries");
        shape_ok = false;
        continue;
      }
      if (!(atom.prob >= 0.0)) {
        complain(path + ".prob", "must be >= 0");
      }
      mass += atom.prob;
      for (std::size_t j = 0; j < n; ++j) {
        mean[j] += atom.prob * atom.offset[j];
      }
    }
    if (std::abs(mass - 1.0) > 1e-12) {
      complain("noise.atoms", "probabilities must sum to 1");
    }
    for (std::size_t j = 0; j < n && shape_ok; ++j) {
      if (std::abs(mean[j]) > 1e-12) {
        complain("noise.atoms", "mean offset of consumer " + std::to_string(j) + " is not 0");
      }
    }
  } else {
    const auto & tg = std::get<TruncatedGaussianNoise>(model.noise);
    if (tg.sigma.size() != n || tg.lower.size() != n || tg.upper.size() != n) {
      complain("noise", "sigma, lower and upper need " + std::to_string(n) + " entries");
      return issues;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::string idx = "[" + std::to_string(j) + "]";
      if (!(tg.sigma[j] >= 0.0)) {
        complain("noise.sigma" + idx, "must be >= 0");
        shape_ok = false;
      }
      if (!(tg.lower[j] < tg.upper[j])) {
        complain("noise.lower" + idx, "must be below upper");
        shape_ok = false;
      } else if (tg.sigma[j] > 0.0 &&
        detail::normal_cdf(tg.upper[j] / tg.sigma[j]) -
        detail::normal_cdf(tg.lower[j] / tg.sigma[j]) < 1e-6)
      {
        complain("noise.lower" + idx, "truncation window holds almost no mass");
        shape_ok = false;
      }
    }
  }
  if (shape_ok) {
    const auto lo = min_noise_offset(model);
    for (std::size_t j = 0; j < n; ++j) {
      if (model.a[j] - model.b[j] * market.p_max + lo[j] < -1e-12) {
        complain("noise", "demand of consumer " + std::to_string(j) +
          " can go negative at p_max (a - b p_max + min offset < 0)");
      }
    }
  }
  return issues;
}

/// Draws D = a - b p + N.
inline DemandVector sample_demand(const DemandModel & model, double p, Rng & rng)
{
  const std::size_t n = model.a.size();
  DemandVector D(n);
  for (std::size_t j = 0; j < n; ++j) {
    D[j] = model.a[j] - model.b[j] * p;
  }
  if (const auto * fs = std::get_if<FiniteSupportNoise>(&model.noise)) {
    double u = uniform01(rng);
    std::size_t pick = fs->atoms.size() - 1;
    for (std::size_t k = 0; k < fs->atoms.size(); ++k) {
      if (u < fs->atoms[k].prob) {
        pick = k;
        break;
      }
      u -= fs->atoms[k].prob;
    }
    for (std::size_t j = 0; j < n; ++j) {
      D[j] += fs->atoms[pick].offset[j];
    }
  } else {
    const auto & tg = std::get<TruncatedGaussianNoise>(model.noise);
    for (std::size_t j = 0; j < n; ++j) {
      if (tg.sigma[j] <= 0.0) {
        continue;
      }
      std::normal_distribution<double> normal(0.0, tg.sigma[j]);
      double z = normal(rng);
      while (z < tg.lower[j] || z > tg.upper[j]) {
        z = normal(rng);
      }
      D[j] += z - truncated_gaussian_mean(tg.sigma[j], tg.lower[j], tg.upper[j]);
    }
  }
  for (auto & d : D) {
    d = std::max(0.0, d);  // only absorbs rounding; the model guarantees d >= 0
  }
  return D;
}

/// Q_t(I, p) for a realized demand: <gamma, I> + g(I, p, D).
inline double realized_cost(
  const MarketParams & market, const Inventory & I, double p, const DemandVector & D)
{
  return dot(market.gamma, I) + allocation_value(I, D, p, market.C);
}

/// A realized demand observed at price p, with its multiplicity.
struct Scenario
{
  double p = 0.0;
  DemandVector D;
  long weight = 1;
};

/**
 * @brief Distinct (p, D) observations with multiplicities.
 *
 * Together with the known gamma and C this is all that is needed to evaluate
 * the averaged cost at any inventory.
 */
struct ScenarioHistory
{
  std::vector<Scenario> entries;

  long total_weight() const
  {
    long w = 0;
    for (const auto & s : entries) {
      w += s.weight;
    }
    return w;
  }

  void clear() {entries.clear();}
};

inline void record_scenario(ScenarioHistory & history, double p, const DemandVector & D)
{
  for (auto & s : history.entries) {
    if (s.p == p && s.D == D) {
      ++s.weight;
      return;
    }
  }
  history.entries.push_back(Scenario{p, D, 1});
}

/// What the learner sees after playing one period.
struct Observation
{
  DemandVector D;
  double cost = 0.0;
};

/**
 * @brief The world the learner interacts with over a fixed horizon.
 *
 * Owns the hidden model and the demand stream, advances the clock one period
 * per play() and appends a StepLog for every period. play() returns nullopt
 * once the horizon is used up.
 */
class Simulator
{
public:
  Simulator(MarketParams market, DemandModel model, long horizon, std::uint64_t run_seed)
  : market_(std::move(market)), model_(std::move(model)), horizon_(horizon),
    rng_(make_rng(run_seed))
  {
    logs_.reserve(static_cast<std::size_t>(std::max(0L, horizon_)));
  }

  const MarketParams & market() const noexcept {return market_;}
  long horizon() const noexcept {return horizon_;}
  long clock() const noexcept {return t_;}
  long remaining() const noexcept {return horizon_ - t_;}
  bool exhausted() const noexcept {return t_ >= horizon_;}

  void set_context(std::size_t agent, int stage, std::span<const double> lcb)
  {
    agent_ = agent;
    stage_ = stage;
    lcb_.assign(lcb.begin(), lcb.end());
  }

  std::optional<Observation> play(const Inventory & I, double p)
  {
    if (exhausted()) {
      return std::nullopt;
    }
    ++t_;
    Observation obs;
    obs.D = sample_demand(model_, p, rng_);
    auto alloc = solve_allocation(I, obs.D, p, market_.C);
    obs.cost = dot(market_.gamma, I) + alloc.objective;

    StepLog log;
    log.t = t_;
    log.agent = agent_;
    log.stage = stage_;
    log.price = p;
    log.I = I;
    log.D = obs.D;
    log.X = std::move(alloc.X);
    log.realized_cost = obs.cost;
    log.lcb = lcb_;
    logs_.push_back(std::move(log));
    return obs;
  }

  const std::vector<StepLog> & logs() const noexcept {return logs_;}
  std::vector<StepLog> take_logs() {return std::move(logs_);}

private:
  MarketParams market_;
  DemandModel model_;
  long horizon_;
  long t_ = 0;
  Rng rng_;
  std::size_t agent_ = 0;
  int stage_ = kInitStage;
  std::vector<double> lcb_;
  std::vector<StepLog> logs_;
};

}  // namespace pla

#endif  // PLA_ENVIRONMENT_HPP_
