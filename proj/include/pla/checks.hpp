#ifndef PLA_CHECKS_HPP_
#define PLA_CHECKS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pla/constants.hpp"
#include "pla/core.hpp"
#include "pla/environment.hpp"
#include "pla/intervals.hpp"
#include "pla/rng.hpp"
#include "pla/saa.hpp"
#include "pla/transport.hpp"
#include "pla/vertex_oracle.hpp"

// Randomized property suites over seeded instances. Each returns a report
// with the number of cases, failures and the worst observed violation.

namespace pla::checks
{

struct Report
{
  explicit Report(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;  ///< largest violation seen (0 when none)
  std::string first_failure;

  bool passed() const {return failures == 0 && cases > 0;}

  void record(bool ok, double violation, const std::string & what)
  {
    ++cases;
    worst = std::max(worst, violation);
    if (!ok) {
      if (failures == 0) {
        first_failure = what;
      }
      ++failures;
    }
  }

  std::string summary() const
  {
    std::ostringstream ss;
    ss << name << ": " << (passed() ? "PASS" : "FAIL") << " (" << cases << " cases, " <<
      failures << " failures, worst violation " << worst << ")";
    if (!first_failure.empty()) {
      ss << " first failure: " << first_failure;
    }
    return ss.str();
  }
};

inline double uniform(Rng & rng, double lo, double hi)
{
  return lo + (hi - lo) * uniform01(rng);
}

inline std::vector<double> uniform_vector(Rng & rng, std::size_t k, double lo, double hi)
{
  std::vector<double> v(k);
  for (auto & x : v) {
    x = uniform(rng, lo, hi);
  }
  return v;
}

/// Random market with m, n in {1, 2, 3} and C entries in [0, p_max].
inline MarketParams random_market(Rng & rng, std::size_t max_dim = 3)
{
  MarketParams mk;
  mk.m = 1 + static_cast<std::size_t>(rng() % max_dim);
  mk.n = 1 + static_cast<std::size_t>(rng() % max_dim);
  mk.p_max = uniform(rng, 1.0, 10.0);
  mk.gamma_max = uniform(rng, 1.0, 3.0);
  mk.gamma = uniform_vector(rng, mk.m, 0.0, mk.gamma_max);
  mk.C = Matrix(mk.m, mk.n);
  for (auto & c : mk.C.data()) {
    c = uniform(rng, 0.0, mk.p_max);
  }
  mk.I_max = uniform(rng, 1.0, 20.0);
  mk.a_max = 20.0;
  mk.b_max = 3.0;
  return mk;
}

/// Random two- to four-atom zero-mean model whose demand stays >= 0 on [0, p_max].
inline DemandModel random_finite_model(Rng & rng, const MarketParams & mk)
{
  DemandModel dm;
  const std::size_t atoms = 2 + static_cast<std::size_t>(rng() % 3);
  dm.b = uniform_vector(rng, mk.n, 0.0, std::min(mk.b_max, 10.0 / mk.p_max));
  FiniteSupportNoise fs;
  std::vector<double> mean(mk.n, 0.0);
  for (std::size_t k = 0; k < atoms; ++k) {
    fs.atoms.push_back(NoiseAtom{uniform_vector(rng, mk.n, -1.0, 1.0), 1.0 / atoms});
  }
  for (const auto & a : fs.atoms) {
    for (std::size_t j = 0; j < mk.n; ++j) {
      mean[j] += a.offset[j] / static_cast<double>(atoms);
    }
  }
  for (auto & a : fs.atoms) {
    for (std::size_t j = 0; j < mk.n; ++j) {
      a.offset[j] -= mean[j];
    }
  }
  dm.noise = fs;
  dm.a.assign(mk.n, 0.0);
  const auto lo = min_noise_offset(dm);
  for (std::size_t j = 0; j < mk.n; ++j) {
    const double floor = dm.b[j] * mk.p_max - lo[j];
    dm.a[j] = floor + uniform(rng, 0.0, 4.0);
  }
  return dm;
}

inline double rel_gap(double x, double y)
{
  return std::abs(x - y) / (1.0 + std::abs(y));
}

/**
 * Transportation solve vs vertex enumeration, with the dual certificate
 * (gap, feasibility, complementary slackness) checked on every instance.
 */
inline Report transport_oracle_equivalence(std::size_t instances, std::uint64_t seed)
{
  Report rep{"transport oracle equivalence"};
  Rng rng = make_rng(seed, 101);
  auto check_one = [&](const Inventory & I, const DemandVector & D, double p, const Matrix & C) {
      const auto res = solve_allocation(I, D, p, C);
      const double oracle = brute_force_allocation(I, D, p, C);
      const double gap = rel_gap(res.objective, oracle);
      const double dual_gap = std::abs(res.objective - dual_objective(res, I, D)) /
        (1.0 + std::abs(res.objective));
      const double dual_infeas = dual_infeasibility(res, p, C);
      double cs = 0.0, primal_infeas = 0.0;
      for (std::size_t i = 0; i < C.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < C.cols(); ++j) {
          row += res.X(i, j);
          if (res.X(i, j) > 1e-9) {
            cs = std::max(cs, C(i, j) - p + res.lambda[i] + res.eta[j]);
          }
          primal_infeas = std::max(primal_infeas, -res.X(i, j));
        }
        primal_infeas = std::max(primal_infeas, row - I[i]);
      }
      for (std::size_t j = 0; j < C.cols(); ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < C.rows(); ++i) {
          col += res.X(i, j);
        }
        primal_infeas = std::max(primal_infeas, col - D[j]);
      }
      const double worst = std::max({gap, dual_gap, dual_infeas, cs, primal_infeas});
      const bool ok = gap <= 1e-9 && dual_gap <= 1e-9 && dual_infeas <= 1e-9 && cs <= 1e-9 &&
        primal_infeas <= 1e-9;
      std::ostringstream what;
      what << "solver " << res.objective << " oracle " << oracle << " dual gap " << dual_gap;
      rep.record(ok, worst, what.str());
    };
  check_one({1, 1}, {1, 1}, 5.0, Matrix{{1, 2}, {3, 10}});  // greedy-by-cost gives -4
  for (std::size_t k = 1; k < instances; ++k) {
    const auto mk = random_market(rng);
    const auto I = uniform_vector(rng, mk.m, 0.0, 5.0);
    const auto D = uniform_vector(rng, mk.n, 0.0, 5.0);
    const double p = uniform(rng, 0.0, mk.p_max);
    // A quarter of the instances use integer data to exercise degenerate ties.
    if (k % 4 == 0) {
      Matrix C(mk.m, mk.n);
      for (auto & c : C.data()) {
        c = static_cast<double>(rng() % 4);
      }
      Inventory Ii(mk.m);
      DemandVector Di(mk.n);
      for (auto & x : Ii) {x = static_cast<double>(rng() % 3);}
      for (auto & x : Di) {x = static_cast<double>(rng() % 3);}
      check_one(Ii, Di, static_cast<double>(rng() % 5), C);
    } else {
      check_one(I, D, p, mk.C);
    }
  }
  return rep;
}

/// g(lambda z1 + (1 - lambda) z2) <= lambda g(z1) + (1 - lambda) g(z2) in z = (I, D).
inline Report allocation_joint_convexity(std::size_t segments, std::uint64_t seed)
{
  Report rep{"allocation joint convexity in (I, D)"};
  Rng rng = make_rng(seed, 102);
  for (std::size_t k = 0; k < segments; ++k) {
    const auto mk = random_market(rng);
    const double p = uniform(rng, 0.0, mk.p_max);
    const auto I1 = uniform_vector(rng, mk.m, 0.0, 5.0), I2 = uniform_vector(rng, mk.m, 0.0, 5.0);
    const auto D1 = uniform_vector(rng, mk.n, 0.0, 5.0), D2 = uniform_vector(rng, mk.n, 0.0, 5.0);
    const double g1 = allocation_value(I1, D1, p, mk.C), g2 = allocation_value(I2, D2, p, mk.C);
    double worst = 0.0;
    for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      Inventory I(mk.m);
      DemandVector D(mk.n);
      for (std::size_t i = 0; i < mk.m; ++i) {I[i] = lam * I1[i] + (1 - lam) * I2[i];}
      for (std::size_t j = 0; j < mk.n; ++j) {D[j] = lam * D1[j] + (1 - lam) * D2[j];}
      const double g = allocation_value(I, D, p, mk.C);
      worst = std::max(worst, g - (lam * g1 + (1 - lam) * g2));
    }
    rep.record(worst <= 1e-9, std::max(0.0, worst), "segment " + std::to_string(k));
  }
  return rep;
}

/// Midpoint convexity of f on an evenly spaced grid over [lo, hi].
template<typename F>
double midpoint_convexity_violation(F && f, double lo, double hi, std::size_t points)
{
  if (!(hi > lo) || points < 3) {
    return 0.0;
  }
  std::vector<double> v(points);
  for (std::size_t k = 0; k < points; ++k) {
    v[k] = f(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < points; ++k) {
    worst = std::max(worst, v[k] - 0.5 * (v[k - 1] + v[k + 1]));
  }
  return worst;
}

/**
 * Midpoint convexity in the price of realized cost with a fixed noise draw,
 * between adjacent breakpoints, for random fixed inventories. Holds for a
 * single edge; with several suppliers the ranking of edges can flip inside an
 * interval and leave a concave kink.
 */
inline Report realized_cost_convex_in_price(std::size_t instances, std::uint64_t seed,
  std::size_t grid = 21, std::size_t max_dim = 3)
{
  Report rep{"realized cost convex in price per interval"};
  Rng rng = make_rng(seed, 103);
  for (std::size_t k = 0; k < instances; ++k) {
    const auto mk = random_market(rng, max_dim);
    const auto dm = random_finite_model(rng, mk);
    const auto & atoms = std::get<FiniteSupportNoise>(dm.noise).atoms;
    const auto & offset = atoms[rng() % atoms.size()].offset;
    Inventory I = uniform_vector(rng, mk.m, 0.0, mk.I_max / static_cast<double>(mk.m));
    const auto set = build_intervals(mk.C, mk.p_max);
    double worst = 0.0;
    for (const auto & iv : set.intervals) {
      auto Qt = [&](double p) {
          DemandVector D(mk.n);
          for (std::size_t j = 0; j < mk.n; ++j) {
            D[j] = std::max(0.0, dm.a[j] - dm.b[j] * p + offset[j]);
          }
          return realized_cost(mk, I, p, D);
        };
      worst = std::max(worst, midpoint_convexity_violation(Qt, iv.lo, iv.hi, grid));
    }
    rep.record(worst <= 1e-7, worst, "instance " + std::to_string(k));
  }
  return rep;
}

/// W is convex on each interval (11-point grid) and L_W-Lipschitz overall.
/// With positive holding costs W = min(0, ...) kinks where the cheapest route
/// breaks even, which is not a breakpoint; several suppliers add the same
/// edge-ranking kinks as realized cost. A single edge with zero_holding is clean.
inline Report optimistic_cost_piecewise_convex(std::size_t instances, std::uint64_t seed,
  std::size_t lipschitz_pairs = 10, std::size_t max_dim = 2, bool zero_holding = false)
{
  Report rep{"optimistic cost piecewise convex and L_W-Lipschitz"};
  Rng rng = make_rng(seed, 104);
  for (std::size_t k = 0; k < instances; ++k) {
    auto mk = random_market(rng, max_dim);
    if (zero_holding) {
      mk.gamma.assign(mk.m, 0.0);
    }
    const auto dm = random_finite_model(rng, mk);
    mk.a_max = std::max(mk.a_max, *std::max_element(dm.a.begin(), dm.a.end()));
    auto W = [&](double p) {return exact_W(mk, dm, p).value;};
    const auto set = build_intervals(mk.C, mk.p_max);
    double convex_worst = 0.0;
    for (const auto & iv : set.intervals) {
      convex_worst = std::max(convex_worst, midpoint_convexity_violation(W, iv.lo, iv.hi, 11));
    }
    const double L = default_lipschitz(mk);
    double lip_worst = 0.0;
    for (std::size_t q = 0; q < lipschitz_pairs; ++q) {
      const double p1 = uniform(rng, 0.0, mk.p_max), p2 = uniform(rng, 0.0, mk.p_max);
      lip_worst = std::max(lip_worst, std::abs(W(p1) - W(p2)) - L * std::abs(p1 - p2));
    }
    const bool ok = convex_worst <= 1e-7 && lip_worst <= 1e-9;
    rep.record(ok, std::max(convex_worst, lip_worst), "instance " + std::to_string(k));
  }
  return rep;
}

/// Random convex piecewise-linear function on [0, 1]: max of affine pieces.
struct ConvexPiecewiseLinear
{
  std::vector<double> slope;
  std::vector<double> intercept;

  double operator()(double x) const
  {
    double v = -kInf;
    for (std::size_t k = 0; k < slope.size(); ++k) {
      v = std::max(v, slope[k] * x + intercept[k]);
    }
    return v;
  }

  /// Exact minimum over [0, 1]: attained at an endpoint or a kink.
  double min_value() const
  {
    double best = std::min((*this)(0.0), (*this)(1.0));
    for (std::size_t i = 0; i < slope.size(); ++i) {
      for (std::size_t j = i + 1; j < slope.size(); ++j) {
        if (slope[i] == slope[j]) {
          continue;
        }
        const double x = (intercept[j] - intercept[i]) / (slope[i] - slope[j]);
        if (x >= 0.0 && x <= 1.0) {
          best = std::min(best, (*this)(x));
        }
      }
    }
    return best;
  }
};

/**
 * Three quarter-point values within [A - Delta, A + Delta] put the largest of
 * them within 4 Delta of the minimum of a convex function.
 */
inline Report quaternary_suboptimality(std::size_t functions, std::uint64_t seed)
{
  Report rep{"quaternary suboptimality bound"};
  Rng rng = make_rng(seed, 105);
  for (std::size_t k = 0; k < functions; ++k) {
    ConvexPiecewiseLinear f;
    const std::size_t pieces = 1 + static_cast<std::size_t>(rng() % 6);
    for (std::size_t q = 0; q < pieces; ++q) {
      f.slope.push_back(uniform(rng, -10.0, 10.0));
      f.intercept.push_back(uniform(rng, -5.0, 5.0));
    }
    const double f1 = f(0.25), f2 = f(0.5), f3 = f(0.75);
    const double hi = std::max({f1, f2, f3}), lo = std::min({f1, f2, f3});
    const double A = 0.5 * (hi + lo);
    // Smallest admissible Delta half the time, a looser one otherwise.
    const double spread = std::max({std::abs(f1 - A), std::abs(f2 - A), std::abs(f3 - A)});
    double Delta = spread + ((k % 2 == 0) ? 0.0 : uniform(rng, 0.0, 1.0));
    if (Delta <= 0.0) {
      Delta = 1e-12;
    }
    const bool premise = std::abs(f1 - A) <= Delta && std::abs(f2 - A) <= Delta &&
      std::abs(f3 - A) <= Delta;
    const double excess = hi - f.min_value() - 4.0 * Delta;
    rep.record(premise && excess <= 1e-9, std::max(0.0, excess),
      "function " + std::to_string(k));
  }
  return rep;
}

}  // namespace pla::checks

#endif  // PLA_CHECKS_HPP_
