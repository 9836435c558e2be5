// pla: command line front end for runs, oracles, the grid baseline, property
// checks and one-field parameter sweeps.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "pla/pla.hpp"

namespace fs = std::filesystem;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct Options
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<std::string> out;
  std::size_t grid = 0;
  std::string window;
  std::size_t mc_oracle = 0;
  std::string field;
  std::string values;
};

void configure_logging()
{
  const char * env = std::getenv("PLA_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet") {
    spdlog::set_level(spdlog::level::warn);
  } else if (level == "trace") {
    spdlog::set_level(spdlog::level::trace);
  } else {
    if (level != "info") {
      spdlog::warn("PLA_LOG={} not recognized (quiet, info, trace); using info", level);
    }
    spdlog::set_level(spdlog::level::info);
  }
  spdlog::set_pattern("[%l] %v");
}

pla::ExperimentConfig load_with_overrides(const Options & opt)
{
  auto cfg = pla::load_config(opt.config);
  if (opt.seed) {cfg.seed = *opt.seed;}
  if (opt.reps) {cfg.replications = *opt.reps;}
  if (opt.out) {cfg.output = *opt.out;}
  if (cfg.replications < 1) {
    throw pla::ConfigError({"replications: must be >= 1"});
  }
  return cfg;
}

std::pair<long, long> parse_window(const std::string & text, long horizon)
{
  if (text.empty()) {
    return {std::min(1024L, std::max(1L, horizon / 32)), horizon};
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw pla::ConfigError({"--window: expected \"a,b\""});
  }
  try {
    const long a = std::stol(text.substr(0, comma));
    const long b = std::stol(text.substr(comma + 1));
    if (a < 1 || b < a) {
      throw pla::ConfigError({"--window: need 1 <= a <= b"});
    }
    return {a, std::min(b, horizon)};
  } catch (const std::logic_error &) {
    throw pla::ConfigError({"--window: expected two integers \"a,b\""});
  }
}

/**
 * Model the regret oracles evaluate against. Continuous noise needs
 * --mc-oracle N: the noise is replaced by N equally likely draws (a fixed
 * stream of the run seed), on which the exact oracles are then run.
 */
pla::DemandModel oracle_model(const pla::ExperimentConfig & cfg, std::size_t mc_samples)
{
  if (cfg.demand.finite_support()) {
    return cfg.demand;
  }
  if (mc_samples == 0) {
    throw pla::ConfigError({"demand.noise: exact regret needs finite-support noise; pass "
                            "--mc-oracle N for an empirical oracle"});
  }
  auto rng = pla::make_rng(cfg.seed, 0x6f7261636c65ULL);
  pla::FiniteSupportNoise empirical;
  for (std::size_t k = 0; k < mc_samples; ++k) {
    auto D = pla::sample_demand(cfg.demand, 0.0, rng);
    for (std::size_t j = 0; j < D.size(); ++j) {
      D[j] -= cfg.demand.a[j];
    }
    empirical.atoms.push_back({D, 1.0 / static_cast<double>(mc_samples)});
  }
  pla::DemandModel model = cfg.demand;
  model.noise = std::move(empirical);
  return model;
}

template<typename F>
void write_file(const fs::path & path, F && writer)
{
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot write " + path.string());
  }
  writer(os);
}

std::vector<long> periods_per_agent(const std::vector<pla::StepLog> & logs, std::size_t agents)
{
  std::vector<long> out(agents, 0);
  for (const auto & log : logs) {
    if (log.agent < agents) {
      ++out[log.agent];
    }
  }
  return out;
}

// Shared by run, baseline and sweep: one replication per seed, then a summary.
template<typename Learner>
std::vector<pla::csv::SummaryRow> replicate(const pla::ExperimentConfig & cfg,
  const Options & opt, const fs::path & out_dir, std::size_t agents, Learner && learner)
{
  fs::create_directories(out_dir);
  const auto model = oracle_model(cfg, opt.mc_oracle);
  const auto oracle = pla::global_optimum(cfg.market, model);
  write_file(out_dir / "oracle.csv", [&](std::ostream & os) {pla::csv::write_oracle(os, oracle);});
  const auto [lo, hi] = parse_window(opt.window, cfg.horizon);
  std::vector<pla::csv::SummaryRow> rows;
  for (int r = 0; r < cfg.replications; ++r) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
    auto logs = learner(seed);
    auto series = pla::compute_regret(logs, cfg.market, model, oracle);
    series.replication = seed;
    const auto fit = pla::fit_slope(series.cumulative, lo, hi);
    series.slope = fit.slope;
    if (!fit.ok()) {
      spdlog::warn("seed {}: slope not available ({})", seed, fit.diagnostic);
    }
    const auto id = std::to_string(seed);
    write_file(out_dir / ("steps_" + id + ".csv"),
      [&](std::ostream & os) {pla::csv::write_steps(os, logs);});
    write_file(out_dir / ("regret_" + id + ".csv"),
      [&](std::ostream & os) {pla::csv::write_regret(os, series);});
    rows.push_back({seed, cfg.horizon, series.final_regret(), series.slope, lo, hi,
        periods_per_agent(logs, agents)});
    spdlog::info("seed {}: Reg(T) = {:.6g}, slope = {:.4f}", seed, series.final_regret(),
      series.slope);
  }
  write_file(out_dir / "summary.csv", [&](std::ostream & os) {pla::csv::write_summary(os, rows);});
  return rows;
}

std::vector<pla::csv::SummaryRow> do_run(const pla::ExperimentConfig & cfg, const Options & opt,
  const fs::path & out_dir)
{
  const auto constants = pla::theorem_constants(cfg);
  spdlog::info("T = {}, delta_K = {:.6g}, n_0 = {}, L_W = {:.6g}", cfg.horizon,
    constants.delta_K, constants.n_0, constants.L_W);
  return replicate(cfg, opt, out_dir, cfg.market.interval_count(), [&](std::uint64_t seed) {
      pla::MetaObserver observer;
      if (spdlog::should_log(spdlog::level::trace)) {
        observer = [](const pla::MetaState & st, const pla::DispatchEvent & ev) {
            spdlog::trace("t = {} agent {} stage {} -> {} periods", st.t, ev.agent,
              ev.stage_before, ev.result.periods);
          };
      }
      return pla::run(cfg, seed, observer).logs;
    });
}

int cmd_run(const Options & opt)
{
  const auto cfg = load_with_overrides(opt);
  do_run(cfg, opt, cfg.output);
  spdlog::info("wrote {}", cfg.output);
  return kExitOk;
}

int cmd_baseline(const Options & opt)
{
  const auto cfg = load_with_overrides(opt);
  const std::size_t G = opt.grid ? opt.grid : pla::default_grid_size(cfg.horizon);
  spdlog::info("grid baseline with G = {}", G);
  replicate(cfg, opt, cfg.output, G, [&](std::uint64_t seed) {
      return pla::baseline_ucb_grid(cfg, G, seed);
    });
  spdlog::info("wrote {}", cfg.output);
  return kExitOk;
}

int cmd_oracle(const Options & opt)
{
  const auto cfg = load_with_overrides(opt);
  const auto model = oracle_model(cfg, opt.mc_oracle);
  const auto oracle = pla::global_optimum(cfg.market, model);
  fs::create_directories(cfg.output);
  const auto path = fs::path(cfg.output) / "oracle.csv";
  write_file(path, [&](std::ostream & os) {pla::csv::write_oracle(os, oracle);});
  spdlog::info("p* = {:.9g}, W* = {:.9g}; wrote {}", oracle.p_star, oracle.W_star,
    path.string());
  return kExitOk;
}

int cmd_check(const Options & opt)
{
  const std::uint64_t seed = opt.seed.value_or(2024);
  const std::vector<pla::checks::Report> reps{
    pla::checks::transport_oracle_equivalence(1000, seed),
    pla::checks::allocation_joint_convexity(500, seed),
    pla::checks::realized_cost_convex_in_price(200, seed),
    pla::checks::optimistic_cost_piecewise_convex(40, seed),
    pla::checks::quaternary_suboptimality(1000, seed),
  };
  bool ok = true;
  for (const auto & r : reps) {
    std::printf("%s\n", r.summary().c_str());
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const Options & opt)
{
  auto base = pla::read_json_file(opt.config);
  const nlohmann::json::json_pointer ptr(opt.field);
  std::vector<std::string> values;
  {
    std::stringstream ss(opt.values);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) {
        values.push_back(item);
      }
    }
  }
  if (values.empty()) {
    throw pla::ConfigError({"--values: need at least one value"});
  }
  const fs::path root = opt.out.value_or(base.value("output", std::string("out")));
  fs::create_directories(root);
  std::ofstream sweep(root / "sweep.csv");
  sweep << "value,seed,horizon,final_regret,slope\n";
  for (const auto & v : values) {
    auto raw = base;
    try {
      raw[ptr] = nlohmann::json::parse(v);
    } catch (const nlohmann::json::exception &) {
      raw[ptr] = v;  // not JSON: take it as a string
    }
    auto cfg = pla::validate_config(raw);
    if (opt.seed) {cfg.seed = *opt.seed;}
    if (opt.reps) {cfg.replications = *opt.reps;}
    std::string tag = v;
    for (auto & c : tag) {
      if (c == '/' || c == ' ' || c == '[' || c == ']' || c == ',') {
        c = '_';
      }
    }
    const auto start = opt.field.find_first_not_of('/');
    std::string name = start == std::string::npos ? "value" : opt.field.substr(start);
    std::replace(name.begin(), name.end(), '/', '.');
    const auto dir = root / (name + "=" + tag);
    spdlog::info("{} = {}", opt.field, v);
    for (const auto & row : do_run(cfg, opt, dir)) {
      sweep << v << ',' << row.seed << ',' << row.horizon << ',' <<
        pla::csv::fmt(row.final_regret) << ',' << pla::csv::fmt(row.slope) << '\n';
    }
  }
  spdlog::info("wrote {}", (root / "sweep.csv").string());
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  configure_logging();
  CLI::App app{"Joint pricing and inventory learning: runs, oracles and checks"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App * sub, bool needs_config) {
      auto * c = sub->add_option("--config", opt.config, "experiment config (JSON)");
      if (needs_config) {
        c->required()->check(CLI::ExistingFile);
      }
      sub->add_option("--seed", opt.seed, "base seed; replication r uses seed + r");
      sub->add_option("--reps", opt.reps, "number of replications");
      sub->add_option("--out", opt.out, "output directory");
      sub->add_option("--window", opt.window, "slope fit window \"a,b\"");
      sub->add_option("--mc-oracle", opt.mc_oracle,
        "empirical oracle with N noise draws (continuous noise only)");
    };

  auto * run = app.add_subcommand("run", "run the LCB learner and write steps/regret CSV");
  add_common(run, true);
  auto * oracle = app.add_subcommand("oracle", "write the exact optimum per interval");
  add_common(oracle, true);
  auto * baseline = app.add_subcommand("baseline", "run the grid UCB comparator");
  add_common(baseline, true);
  baseline->add_option("--grid", opt.grid, "number of grid prices (default ceil(T^(1/3)))")
    ->check(CLI::PositiveNumber);
  auto * check = app.add_subcommand("check", "run the randomized property suites");
  check->add_option("--seed", opt.seed, "seed of the random instances");
  auto * sweep = app.add_subcommand("sweep", "vary one config field over a list of values");
  add_common(sweep, true);
  sweep->add_option("--field", opt.field, "JSON pointer, e.g. /horizon or /market/I_max")
    ->required();
  sweep->add_option("--values", opt.values, "comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {return cmd_run(opt);}
    if (*oracle) {return cmd_oracle(opt);}
    if (*baseline) {return cmd_baseline(opt);}
    if (*check) {return cmd_check(opt);}
    if (*sweep) {return cmd_sweep(opt);}
  } catch (const pla::ConfigError & e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const nlohmann::json::exception & e) {
    spdlog::error("config: {}", e.what());
    return kExitConfig;
  } catch (const std::exception & e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
