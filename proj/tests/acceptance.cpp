// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "pla/pla.hpp"

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int failures = 0;

void report(int id, const std::string & name, bool ok, const std::string & detail)
{
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

std::string join(const std::vector<pla::checks::Report> & reps)
{
  std::string out;
  for (const auto & r : reps) {
    out += (out.empty() ? "" : "; ") + r.summary();
  }
  return out;
}

void criterion_transport()
{
  const auto t0 = Clock::now();
  const auto rep = pla::checks::transport_oracle_equivalence(1000, 2024);
  const double secs = seconds_since(t0);
  std::ostringstream ss;
  ss << rep.summary() << ", " << secs << " s";
  report(1, "transport oracle equivalence", rep.passed() && secs < 10.0, ss.str());
}

void criterion_convexity()
{
  const auto t0 = Clock::now();
  std::vector<pla::checks::Report> reps{
    pla::checks::allocation_joint_convexity(500, 2024),
    pla::checks::realized_cost_convex_in_price(200, 2024),
    pla::checks::optimistic_cost_piecewise_convex(40, 2024),
  };
  const double secs = seconds_since(t0);
  bool ok = secs < 30.0;
  for (const auto & r : reps) {
    ok = ok && r.passed();
  }
  report(2, "convexity suites", ok, join(reps) + ", " + std::to_string(secs) + " s");
}

void criterion_closed_form()
{
  double worst = 0.0;
  for (double g : {0.0, 0.3, 0.7}) {
    for (double a : {1.0, 0.8}) {
      for (double b : {1.0, 0.5}) {
        pla::MarketParams mk;
        mk.m = mk.n = 1;
        mk.gamma = {g};
        mk.C = pla::Matrix{{0.0}};
        mk.p_max = mk.I_max = mk.gamma_max = mk.a_max = mk.b_max = 1.0;
        const pla::DemandModel dm{{a}, {b}, pla::FiniteSupportNoise{{{{0.0}, 1.0}}}};
        for (int k = 0; k <= 100; ++k) {
          const double p = k / 100.0;
          const double closed = std::min(0.0, (g - p) * (a - b * p));
          worst = std::max(worst, std::abs(pla::exact_W(mk, dm, p).value - closed));
        }
      }
    }
  }
  pla::MarketParams mk;
  mk.m = mk.n = 1;
  mk.gamma = {0.0};
  mk.C = pla::Matrix{{0.0}};
  mk.p_max = mk.I_max = mk.gamma_max = mk.a_max = mk.b_max = 1.0;
  const pla::DemandModel dm{{1.0}, {1.0}, pla::FiniteSupportNoise{{{{0.0}, 1.0}}}};
  const auto opt = pla::global_optimum(mk, dm);
  mk.gamma = {0.3};
  const auto shifted = pla::global_optimum(mk, dm);
  const double vertex_err = std::max({std::abs(opt.p_star - 0.5), std::abs(opt.W_star + 0.25),
    std::abs(shifted.p_star - 0.65), std::abs(shifted.W_star + 0.1225)});
  std::ostringstream ss;
  ss << "max |W - closed form| = " << worst << " on 101-point grids, vertex error " << vertex_err
     << " (p* = " << opt.p_star << ", W* = " << opt.W_star << ")";
  report(3, "closed-form oracle check", worst <= 1e-9 && vertex_err <= 1e-6, ss.str());
}

void criterion_quaternary()
{
  const auto rep = pla::checks::quaternary_suboptimality(1000, 2024);
  report(4, "quaternary suboptimality", rep.passed(), rep.summary());
}

struct SeedOutcome
{
  double reg_T = 0.0;
  double reg_half = 0.0;
  double slope = pla::kNaN;
  double baseline_reg_T = 0.0;
  long lcb_checks = 0;
  long lcb_valid = 0;
  std::vector<std::string> structural;
};

SeedOutcome run_seed(const pla::ExperimentConfig & cfg, const pla::OracleResult & oracle,
  std::uint64_t seed)
{
  SeedOutcome out;
  const auto k = pla::theorem_constants(cfg);
  const double log_term = pla::log43(k.horizon) + k.C_check;
  const double burn_in = pla::burn_in_periods(cfg.market, k);
  std::vector<double> stage1_delta;
  auto fail = [&](const std::string & what) {
      if (out.structural.size() < 5) {
        out.structural.push_back("seed " + std::to_string(seed) + ": " + what);
      }
    };

  auto observer = [&](const pla::MetaState & st, const pla::DispatchEvent &) {
      if (stage1_delta.empty()) {
        stage1_delta.assign(st.agents.size(), pla::kInf);
      }
      long total = 0;
      for (std::size_t K = 0; K < st.agents.size(); ++K) {
        const auto & a = st.agents[K];
        total += a.T_K;
        if (a.stage == 1) {
          const double expect = std::pow(0.75, a.completed_epochs) * a.interval.width();
          if (std::abs((a.U - a.L) - expect) > 1e-12) {
            fail("bracket width off the (3/4)^E schedule for agent " + std::to_string(K));
          }
          if (a.Delta > stage1_delta[K]) {
            fail("Delta increased within Stage 1 for agent " + std::to_string(K));
          }
          stage1_delta[K] = a.Delta;
        }
        if (a.completed_epochs > log_term) {
          fail("epoch cap exceeded for agent " + std::to_string(K));
        }
        if (static_cast<double>(a.T_K) >= 6.0 * log_term && a.stage != 2 &&
          std::isinf(a.Delta))
        {
          fail("Delta still infinite after the minimum sample count, agent " +
            std::to_string(K));
        }
        if (static_cast<double>(st.t) >= burn_in) {
          ++out.lcb_checks;
          out.lcb_valid += st.lcb[K] <= oracle.per_interval[K].W + 1e-6;
        }
      }
      if (total != st.t) {
        fail("sum of T_K differs from the clock");
      }
    };

  auto res = pla::run(cfg, seed, observer);
  if (static_cast<long>(res.logs.size()) != cfg.horizon) {
    fail("log count differs from T");
  }
  long total = 0;
  for (const auto & a : res.state.agents) {
    total += a.T_K;
  }
  if (total != cfg.horizon) {
    fail("sum of T_K differs from T at the end");
  }

  auto series = pla::compute_regret(res.logs, cfg.market, cfg.demand, oracle);
  out.reg_T = series.cumulative.back();
  out.reg_half = series.cumulative[static_cast<std::size_t>(cfg.horizon / 2 - 1)];
  out.slope = pla::fit_slope(series.cumulative, 1L << 10, cfg.horizon).slope;

  auto baseline = pla::baseline_ucb_grid(cfg, pla::default_grid_size(cfg.horizon), seed);
  out.baseline_reg_T = pla::compute_regret(baseline, cfg.market, cfg.demand, oracle)
    .cumulative.back();
  return out;
}

bool deterministic(const pla::ExperimentConfig & cfg, std::uint64_t seed)
{
  auto bytes = [&] {
      auto res = pla::run(cfg, seed);
      std::ostringstream os;
      pla::csv::write_steps(os, res.logs);
      return os.str();
    };
  return bytes() == bytes();
}

}  // namespace

int main()
{
  criterion_transport();
  criterion_convexity();
  criterion_closed_form();
  criterion_quaternary();

  const auto t0 = Clock::now();
  const auto cfg = pla::load_config(std::string(PLA_CONFIG_DIR) + "/reference.json");
  const auto oracle = pla::global_optimum(cfg.market, cfg.demand);
  const int seeds = 10;
  std::vector<SeedOutcome> outcomes;
  for (int r = 0; r < seeds; ++r) {
    outcomes.push_back(run_seed(cfg, oracle, cfg.seed + static_cast<std::uint64_t>(r)));
  }
  const double run_secs = seconds_since(t0);

  {
    bool ok_a = true;
    std::vector<double> slopes;
    std::ostringstream ss;
    for (const auto & o : outcomes) {
      const double T = static_cast<double>(cfg.horizon);
      ok_a = ok_a && (o.reg_T / T < o.reg_half / (T / 2.0));
      slopes.push_back(std::isnan(o.slope) ? pla::kInf : o.slope);
    }
    const double med = median(slopes);
    ss << "T = " << cfg.horizon << ", " << seeds << " seeds, " << run_secs << " s; "
       << "(a) Reg(T)/T < Reg(T/2)/(T/2) on every seed: " << (ok_a ? "yes" : "no")
       << " [seed " << cfg.seed << ": " << outcomes[0].reg_T / cfg.horizon << " vs "
       << outcomes[0].reg_half / (cfg.horizon / 2.0) << "]"
       << "; (b) median slope on [2^10, 2^15] = " << med << " (limit 0.75)";
    report(5, "regret sublinearity and slope", ok_a && med <= 0.75, ss.str());
  }
  {
    long checks = 0, valid = 0;
    for (const auto & o : outcomes) {
      checks += o.lcb_checks;
      valid += o.lcb_valid;
    }
    const double freq = checks ? static_cast<double>(valid) / static_cast<double>(checks) : 0.0;
    std::ostringstream ss;
    ss << valid << " of " << checks << " post-burn-in checkpoints valid (" << 100.0 * freq
       << "%, need >= 95%)";
    report(6, "LCB validity", checks > 0 && freq >= 0.95, ss.str());
  }
  {
    std::vector<std::string> problems;
    for (const auto & o : outcomes) {
      problems.insert(problems.end(), o.structural.begin(), o.structural.end());
    }
    const bool det = deterministic(cfg, cfg.seed);
    if (!det) {
      problems.push_back("run is not byte-for-byte reproducible");
    }
    std::string detail = problems.empty() ?
      "clock conservation, (3/4)^E shrink, epoch cap, Stage-1 Delta monotone, finite Delta "
      "after the minimum sample count, byte-identical reruns" :
      problems.front() + (problems.size() > 1 ? " (+" + std::to_string(problems.size() - 1) +
      " more)" : "");
    report(7, "structural invariants", problems.empty(), detail);
  }
  {
    std::vector<double> ours, theirs;
    for (const auto & o : outcomes) {
      ours.push_back(o.reg_T);
      theirs.push_back(o.baseline_reg_T);
    }
    const double a = median(ours), b = median(theirs);
    std::ostringstream ss;
    ss << "median Reg(T): LCB " << a << ", grid baseline (G = "
       << pla::default_grid_size(cfg.horizon) << ") " << b;
    report(8, "baseline comparison", a <= b, ss.str());
  }

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
