#ifndef PLA_CSV_HPP_
#define PLA_CSV_HPP_

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pla/meta.hpp"
#include "pla/regret.hpp"
#include "pla/saa.hpp"
#include "pla/step_log.hpp"

// Plot-ready CSV files. Floats use 17 significant digits so a parse gives
// back the exact doubles; infinities and NaN print as inf / -inf / nan.

namespace pla::csv
{

inline constexpr const char * kStepsSchema = "# pla-steps v1";

inline std::string fmt(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline double parse_double(const std::string & s)
{
  char * end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::runtime_error("csv: not a number: '" + s + "'");
  }
  return v;
}

inline std::vector<std::string> split(const std::string & line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

inline void write_steps(std::ostream & os, const std::vector<StepLog> & logs)
{
  const std::size_t m = logs.empty() ? 0 : logs.front().I.size();
  const std::size_t n = logs.empty() ? 0 : logs.front().D.size();
  const std::size_t k = logs.empty() ? 0 : logs.front().lcb.size();
  os << kStepsSchema << '\n';
  os << "t,agent,stage,price";
  for (std::size_t i = 0; i < m; ++i) {os << ",I_" << i;}
  for (std::size_t j = 0; j < n; ++j) {os << ",D_" << j;}
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {os << ",X_" << i << '_' << j;}
  }
  os << ",realized_cost,expected_cost,regret";
  for (std::size_t K = 0; K < k; ++K) {os << ",lcb_" << K;}
  os << '\n';
  for (const auto & log : logs) {
    os << log.t << ',' << log.agent << ',' << log.stage << ',' << fmt(log.price);
    for (double v : log.I) {os << ',' << fmt(v);}
    for (double v : log.D) {os << ',' << fmt(v);}
    for (double v : log.X.data()) {os << ',' << fmt(v);}
    os << ',' << fmt(log.realized_cost) << ',' << fmt(log.expected_cost) << ',' <<
      fmt(log.regret);
    for (double v : log.lcb) {os << ',' << fmt(v);}
    os << '\n';
  }
}

inline std::vector<StepLog> read_steps(std::istream & is)
{
  std::string line;
  if (!std::getline(is, line) || line != kStepsSchema) {
    throw std::runtime_error("csv: missing or unknown steps schema line");
  }
  if (!std::getline(is, line)) {
    throw std::runtime_error("csv: missing header");
  }
  const auto header = split(line);
  std::size_t m = 0, n = 0, k = 0;
  for (const auto & h : header) {
    if (h.rfind("I_", 0) == 0) {++m;}
    if (h.rfind("D_", 0) == 0) {++n;}
    if (h.rfind("lcb_", 0) == 0) {++k;}
  }
  const std::size_t width = 4 + m + n + m * n + 3 + k;
  if (header.size() != width) {
    throw std::runtime_error("csv: header does not match the steps schema");
  }
  std::vector<StepLog> logs;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != width) {
      throw std::runtime_error("csv: row " + std::to_string(logs.size() + 1) + " has " +
        std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
    }
    StepLog log;
    std::size_t c = 0;
    log.t = std::stol(cells[c++]);
    log.agent = std::stoul(cells[c++]);
    log.stage = std::stoi(cells[c++]);
    log.price = parse_double(cells[c++]);
    for (std::size_t i = 0; i < m; ++i) {log.I.push_back(parse_double(cells[c++]));}
    for (std::size_t j = 0; j < n; ++j) {log.D.push_back(parse_double(cells[c++]));}
    log.X = Matrix(m, n);
    for (std::size_t e = 0; e < m * n; ++e) {log.X.data()[e] = parse_double(cells[c++]);}
    log.realized_cost = parse_double(cells[c++]);
    log.expected_cost = parse_double(cells[c++]);
    log.regret = parse_double(cells[c++]);
    for (std::size_t K = 0; K < k; ++K) {log.lcb.push_back(parse_double(cells[c++]));}
    logs.push_back(std::move(log));
  }
  return logs;
}

inline void write_regret(std::ostream & os, const RegretSeries & series)
{
  os << "t,instantaneous,cumulative\n";
  for (std::size_t k = 0; k < series.cumulative.size(); ++k) {
    os << (k + 1) << ',' << fmt(series.instantaneous[k]) << ',' << fmt(series.cumulative[k]) <<
      '\n';
  }
}

inline void write_oracle(std::ostream & os, const OracleResult & oracle)
{
  const std::size_t m = oracle.I_star.size();
  os << "scope,K,lo,hi,p,W";
  for (std::size_t i = 0; i < m; ++i) {os << ",I_" << i;}
  os << '\n';
  os << "global,," << ",," << fmt(oracle.p_star) << ',' << fmt(oracle.W_star);
  for (double v : oracle.I_star) {os << ',' << fmt(v);}
  os << '\n';
  for (const auto & iv : oracle.per_interval) {
    os << "interval," << iv.K << ',' << fmt(iv.lo) << ',' << fmt(iv.hi) << ',' << fmt(iv.p) <<
      ',' << fmt(iv.W);
    for (double v : iv.I) {os << ',' << fmt(v);}
    os << '\n';
  }
}

struct SummaryRow
{
  std::uint64_t seed = 0;
  long horizon = 0;
  double final_regret = 0.0;
  double slope = kNaN;
  long window_lo = 0;
  long window_hi = 0;
  std::vector<long> periods_per_agent;
};

inline void write_summary(std::ostream & os, const std::vector<SummaryRow> & rows)
{
  const std::size_t k = rows.empty() ? 0 : rows.front().periods_per_agent.size();
  os << "seed,horizon,final_regret,slope,window_lo,window_hi";
  for (std::size_t K = 0; K < k; ++K) {os << ",T_" << K;}
  os << '\n';
  for (const auto & r : rows) {
    os << r.seed << ',' << r.horizon << ',' << fmt(r.final_regret) << ',' << fmt(r.slope) << ',' <<
      r.window_lo << ',' << r.window_hi;
    for (long v : r.periods_per_agent) {os << ',' << v;}
    os << '\n';
  }
}

}  // namespace pla::csv

#endif  // PLA_CSV_HPP_
