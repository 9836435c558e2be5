#ifndef PLA_CONFIG_HPP_
#define PLA_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "pla/constants.hpp"
#include "pla/core.hpp"
#include "pla/environment.hpp"

namespace pla
{

struct ExperimentConfig
{
  MarketParams market;
  DemandModel demand;
  long horizon = 0;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  std::optional<double> L_W;
  std::string output = "out";
  int replications = 1;
};

/// Raised by validate_config with every problem found, not just the first.
class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(std::vector<std::string> issues)
  : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string> & issues() const noexcept {return issues_;}

private:
  static std::string join(const std::vector<std::string> & issues)
  {
    std::string out = "invalid config:";
    for (const auto & s : issues) {
      out += "\n  " + s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

/// Smallest horizon that leaves room for the initialization probes.
inline long min_horizon(const MarketParams & market)
{
  return 3 * static_cast<long>(market.interval_count()) * 3;
}

/// Every violated market invariant as "market.<path>: <rule>".
inline std::vector<std::string> market_issues(const MarketParams & mk)
{
  std::vector<std::string> issues;
  auto complain = [&](const std::string & path, const std::string & rule) {
      issues.push_back("market." + path + ": " + rule);
    };
  if (mk.m == 0) {complain("m", "must be positive");}
  if (mk.n == 0) {complain("n", "must be positive");}
  for (const auto & [name, value] : std::vector<std::pair<std::string, double>>{
      {"p_max", mk.p_max}, {"I_max", mk.I_max}, {"gamma_max", mk.gamma_max},
      {"a_max", mk.a_max}, {"b_max", mk.b_max}})
  {
    if (!(value >= 1.0)) {
      complain(name, name + " < 1 violates the boundedness normalization (bounds must be >= 1)");
    }
  }
  if (mk.gamma.size() != mk.m) {
    complain("gamma", "expected " + std::to_string(mk.m) + " entries");
  } else {
    for (std::size_t i = 0; i < mk.m; ++i) {
      const std::string path = "gamma[" + std::to_string(i) + "]";
      if (!(mk.gamma[i] >= 0.0)) {complain(path, "must be >= 0");}
      if (mk.gamma[i] > mk.gamma_max) {complain(path, "gamma[" + std::to_string(i) +
          "] exceeds gamma_max");}
    }
  }
  if (mk.C.rows() != mk.m || mk.C.cols() != mk.n) {
    complain("C", "expected a " + std::to_string(mk.m) + "x" + std::to_string(mk.n) + " matrix");
  } else {
    for (std::size_t i = 0; i < mk.m; ++i) {
      for (std::size_t j = 0; j < mk.n; ++j) {
        const std::string cell = "C[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        if (!(mk.C(i, j) >= 0.0)) {complain(cell, cell + " must be >= 0");}
        if (mk.C(i, j) > mk.p_max) {complain(cell, cell + " exceeds p_max");}
      }
    }
  }
  return issues;
}

namespace detail
{

using nlohmann::json;

// Pulls typed fields out of a JSON object, recording problems instead of
// throwing so that validation can report all of them at once.
class FieldReader
{
public:
  explicit FieldReader(std::vector<std::string> & issues) : issues_(issues) {}

  const json * child(const json & obj, const std::string & key, const std::string & path,
    bool required = true)
  {
    if (!obj.is_object()) {
      issue(path, "must be an object");
      return nullptr;
    }
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) {
        issue(join(path, key), "missing");
      }
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json & obj, const std::string & key, const std::string & path,
    bool required = true)
  {
    const json * v = child(obj, key, path, required);
    if (v == nullptr) {
      return std::nullopt;
    }
    if (!v->is_number()) {
      issue(join(path, key), "must be a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<long long> integer(const json & obj, const std::string & key,
    const std::string & path, bool required = true)
  {
    const json * v = child(obj, key, path, required);
    if (v == nullptr) {
      return std::nullopt;
    }
    if (!v->is_number_integer()) {
      issue(join(path, key), "must be an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<std::vector<double>> vector(const json & obj, const std::string & key,
    const std::string & path)
  {
    const json * v = child(obj, key, path);
    if (v == nullptr) {
      return std::nullopt;
    }
    return as_vector(*v, join(path, key));
  }

  std::optional<std::vector<double>> as_vector(const json & v, const std::string & path)
  {
    if (!v.is_array()) {
      issue(path, "must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) {
        issue(path + "[" + std::to_string(k) + "]", "must be a number");
        return std::nullopt;
      }
      out.push_back(v[k].get<double>());
    }
    return out;
  }

  void issue(const std::string & path, const std::string & rule)
  {
    issues_.push_back(path + ": " + rule);
  }

  static std::string join(const std::string & path, const std::string & key)
  {
    return path.empty() ? key : path + "." + key;
  }

private:
  std::vector<std::string> & issues_;
};

}  // namespace detail

/**
 * @brief Parses and validates a raw config document.
 *
 * Throws ConfigError listing every missing field, type error and violated
 * invariant, each prefixed by its field path.
 */
inline ExperimentConfig validate_config(const nlohmann::json & raw)
{
  using detail::json;
  std::vector<std::string> issues;
  detail::FieldReader rd(issues);
  ExperimentConfig cfg;

  if (!raw.is_object()) {
    throw ConfigError({"config: top level must be an object"});
  }

  bool market_ok = false;
  if (const json * mk = rd.child(raw, "market", "")) {
    auto & m = cfg.market;
    const auto gamma = rd.vector(*mk, "gamma", "market");
    std::optional<Matrix> C;
    if (const json * cj = rd.child(*mk, "C", "market")) {
      if (!cj->is_array() || cj->empty()) {
        rd.issue("market.C", "must be a non-empty array of rows");
      } else {
        std::vector<std::vector<double>> rows;
        bool ok = true;
        for (std::size_t i = 0; i < cj->size(); ++i) {
          auto row = rd.as_vector((*cj)[i], "market.C[" + std::to_string(i) + "]");
          if (!row) {
            ok = false;
            break;
          }
          if (!rows.empty() && row->size() != rows.front().size()) {
            rd.issue("market.C", "rows must all have the same length");
            ok = false;
            break;
          }
          rows.push_back(std::move(*row));
        }
        if (ok && !rows.front().empty()) {
          Matrix mat(rows.size(), rows.front().size());
          for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
              mat(i, j) = rows[i][j];
            }
          }
          C = std::move(mat);
        } else if (ok) {
          rd.issue("market.C", "rows must be non-empty");
        }
      }
    }
    const auto p_max = rd.number(*mk, "p_max", "market");
    const auto I_max = rd.number(*mk, "I_max", "market");
    const auto gamma_max = rd.number(*mk, "gamma_max", "market");
    const auto a_max = rd.number(*mk, "a_max", "market");
    const auto b_max = rd.number(*mk, "b_max", "market");
    const auto m_decl = rd.integer(*mk, "m", "market", false);
    const auto n_decl = rd.integer(*mk, "n", "market", false);
    if (gamma && C && p_max && I_max && gamma_max && a_max && b_max) {
      m.m = C->rows();
      m.n = C->cols();
      m.gamma = *gamma;
      m.C = std::move(*C);
      m.p_max = *p_max;
      m.I_max = *I_max;
      m.gamma_max = *gamma_max;
      m.a_max = *a_max;
      m.b_max = *b_max;
      if (m_decl && *m_decl != static_cast<long long>(m.m)) {
        rd.issue("market.m", "does not match the number of rows of C");
      }
      if (n_decl && *n_decl != static_cast<long long>(m.n)) {
        rd.issue("market.n", "does not match the number of columns of C");
      }
      const auto mi = market_issues(m);
      issues.insert(issues.end(), mi.begin(), mi.end());
      market_ok = mi.empty();
    }
  }

  if (const json * dm = rd.child(raw, "demand", "")) {
    const auto a = rd.vector(*dm, "a", "demand");
    const auto b = rd.vector(*dm, "b", "demand");
    std::optional<NoiseSpec> noise;
    if (const json * nz = rd.child(*dm, "noise", "demand")) {
      const json * type = rd.child(*nz, "type", "demand.noise");
      if (type != nullptr && type->is_string() && *type == "finite_support") {
        FiniteSupportNoise fs;
        bool ok = true;
        if (const json * atoms = rd.child(*nz, "atoms", "demand.noise")) {
          if (!atoms->is_array()) {
            rd.issue("demand.noise.atoms", "must be an array");
            ok = false;
          } else {
            for (std::size_t k = 0; k < atoms->size(); ++k) {
              const std::string path = "demand.noise.atoms[" + std::to_string(k) + "]";
              const auto off = rd.vector((*atoms)[k], "offset", path);
              const auto prob = rd.number((*atoms)[k], "prob", path);
              if (off && prob) {
                fs.atoms.push_back(NoiseAtom{*off, *prob});
              } else {
                ok = false;
              }
            }
          }
        } else {
          ok = false;
        }
        if (ok) {
          noise = fs;
        }
      } else if (type != nullptr && type->is_string() && *type == "truncated_gaussian") {
        const auto sigma = rd.vector(*nz, "sigma", "demand.noise");
        const auto lower = rd.vector(*nz, "lower", "demand.noise");
        const auto upper = rd.vector(*nz, "upper", "demand.noise");
        if (sigma && lower && upper) {
          noise = TruncatedGaussianNoise{*sigma, *lower, *upper};
        }
      } else if (type != nullptr) {
        rd.issue("demand.noise.type", "must be \"finite_support\" or \"truncated_gaussian\"");
      }
    }
    if (a && b && noise) {
      cfg.demand = DemandModel{*a, *b, *noise};
      if (market_ok) {
        const auto di = demand_model_issues(cfg.demand, cfg.market);
        issues.insert(issues.end(), di.begin(), di.end());
      }
    }
  }

  if (const auto T = rd.integer(raw, "horizon", "")) {
    cfg.horizon = static_cast<long>(*T);
    if (cfg.market.m > 0 && cfg.market.n > 0 && cfg.horizon < min_horizon(cfg.market)) {
      rd.issue("horizon", "must be at least 9 (mn + 1) = " +
        std::to_string(min_horizon(cfg.market)));
    } else if (cfg.horizon < 1) {
      rd.issue("horizon", "must be positive");
    }
  }
  if (const auto eps = rd.number(raw, "epsilon", "", false)) {
    cfg.epsilon = *eps;
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
      rd.issue("epsilon", "must lie in (0, 1)");
    }
  }
  if (const json * seed = rd.child(raw, "seed", "", false)) {
    if (seed->is_number_unsigned()) {
      cfg.seed = seed->get<std::uint64_t>();
    } else if (seed->is_number_integer() && seed->get<long long>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(seed->get<long long>());
    } else {
      rd.issue("seed", "must be a non-negative integer");
    }
  }
  if (const auto lw = rd.number(raw, "L_W", "", false)) {
    cfg.L_W = *lw;
    if (!(*lw >= 0.0)) {
      rd.issue("L_W", "must be >= 0");
    }
  }
  if (const json * out = rd.child(raw, "output", "", false)) {
    if (out->is_string()) {
      cfg.output = out->get<std::string>();
    } else {
      rd.issue("output", "must be a string");
    }
  }
  if (const auto reps = rd.integer(raw, "replications", "", false)) {
    cfg.replications = static_cast<int>(*reps);
    if (*reps < 1) {
      rd.issue("replications", "must be >= 1");
    }
  }

  if (!issues.empty()) {
    throw ConfigError(std::move(issues));
  }
  return cfg;
}

inline nlohmann::json to_json(const ExperimentConfig & cfg)
{
  using nlohmann::json;
  json C = json::array();
  for (std::size_t i = 0; i < cfg.market.C.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < cfg.market.C.cols(); ++j) {
      row.push_back(cfg.market.C(i, j));
    }
    C.push_back(row);
  }
  json noise;
  if (const auto * fs = std::get_if<FiniteSupportNoise>(&cfg.demand.noise)) {
    noise["type"] = "finite_support";
    noise["atoms"] = json::array();
    for (const auto & atom : fs->atoms) {
      noise["atoms"].push_back({{"offset", atom.offset}, {"prob", atom.prob}});
    }
  } else {
    const auto & tg = std::get<TruncatedGaussianNoise>(cfg.demand.noise);
    noise = {{"type", "truncated_gaussian"}, {"sigma", tg.sigma}, {"lower", tg.lower},
      {"upper", tg.upper}};
  }
  json out = {
    {"market", {
        {"m", cfg.market.m}, {"n", cfg.market.n}, {"gamma", cfg.market.gamma}, {"C", C},
        {"p_max", cfg.market.p_max}, {"I_max", cfg.market.I_max},
        {"gamma_max", cfg.market.gamma_max}, {"a_max", cfg.market.a_max},
        {"b_max", cfg.market.b_max}}},
    {"demand", {{"a", cfg.demand.a}, {"b", cfg.demand.b}, {"noise", noise}}},
    {"horizon", cfg.horizon},
    {"epsilon", cfg.epsilon},
    {"seed", cfg.seed},
    {"output", cfg.output},
    {"replications", cfg.replications},
  };
  if (cfg.L_W) {
    out["L_W"] = *cfg.L_W;
  }
  return out;
}

inline nlohmann::json read_json_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({"config: cannot open " + path});
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error & e) {
    throw ConfigError({"config: " + path + " is not valid JSON (" + e.what() + ")"});
  }
}

inline ExperimentConfig load_config(const std::string & path)
{
  return validate_config(read_json_file(path));
}

inline TheoremConstants theorem_constants(const ExperimentConfig & cfg)
{
  return theorem_constants(cfg.market, static_cast<double>(cfg.horizon), cfg.epsilon, cfg.L_W);
}

}  // namespace pla

#endif  // PLA_CONFIG_HPP_
