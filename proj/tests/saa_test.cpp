#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "pla/checks.hpp"
#include "pla/saa.hpp"

namespace
{

pla::MarketParams one_by_one(double gamma, double I_max = 2.0, double p_max = 1.0)
{
  pla::MarketParams mk;
  mk.m = mk.n = 1;
  mk.gamma = {gamma};
  mk.C = pla::Matrix{{0.0}};
  mk.p_max = p_max;
  mk.I_max = I_max;
  mk.gamma_max = 1.0;
  mk.a_max = 2.0;
  mk.b_max = 1.0;
  return mk;
}

pla::DemandModel noiseless(double a, double b)
{
  return {{a}, {b}, pla::FiniteSupportNoise{{{{0.0}, 1.0}}}};
}

pla::DemandModel two_point(double a, double b, double h)
{
  return {{a}, {b}, pla::FiniteSupportNoise{{{{-h}, 0.5}, {{h}, 0.5}}}};
}

pla::AggregatedCost scenarios(double p, std::initializer_list<double> demands)
{
  pla::AggregatedCost agg;
  agg.p = p;
  for (double d : demands) {
    agg.add({d});
  }
  return agg;
}

}  // namespace

TEST(SaaArgmin, CertainDemandNewsvendor)
{
  const auto fit = pla::saa_argmin_inventory(one_by_one(0.3), scenarios(1.0, {1.0}));
  EXPECT_NEAR(fit.I[0], 1.0, 1e-9);
  EXPECT_NEAR(fit.value, -0.7, 1e-9);
}

TEST(SaaArgmin, TwoScenarioNewsvendorSitsOnAtom)
{
  const auto mk = one_by_one(0.3);
  const auto agg = scenarios(1.0, {0.5, 1.5});
  const auto fit = pla::saa_argmin_inventory(mk, agg);
  // Candidate inventories at the support points, evaluated directly.
  const double at_low = 0.3 * 0.5 - 0.5 * (0.5 + 0.5);
  const double at_high = 0.3 * 1.5 - 0.5 * (0.5 + 1.5);
  EXPECT_NEAR(at_low, -0.35, 1e-12);
  EXPECT_NEAR(at_high, -0.55, 1e-12);
  EXPECT_NEAR(fit.I[0], 1.5, 1e-9);
  EXPECT_NEAR(fit.value, at_high, 1e-9);
}

TEST(SaaArgmin, UnprofitableInventoryStaysEmpty)
{
  auto mk = one_by_one(0.9);
  const auto fit = pla::saa_argmin_inventory(mk, scenarios(0.5, {1.0, 0.7}));
  EXPECT_NEAR(fit.I[0], 0.0, 1e-9);
  EXPECT_NEAR(fit.value, 0.0, 1e-9);
}

TEST(SaaArgmin, ValueMatchesReevaluationAndBeatsProbes)
{
  auto rng = pla::make_rng(41);
  for (int k = 0; k < 60; ++k) {
    const auto mk = pla::checks::random_market(rng);
    pla::AggregatedCost agg;
    agg.p = pla::checks::uniform(rng, 0.0, mk.p_max);
    const int count = 1 + static_cast<int>(rng() % 6);
    for (int s = 0; s < count; ++s) {
      agg.add(pla::checks::uniform_vector(rng, mk.n, 0.0, 6.0), 1.0 + (rng() % 3));
    }
    const auto fit = pla::saa_argmin_inventory(mk, agg);
    EXPECT_NEAR(fit.value, pla::aggregated_value(mk, agg, fit.I), 1e-8);
    EXPECT_NEAR(fit.value, fit.lp_objective, 1e-8 * (1.0 + std::abs(fit.value)));
    EXPECT_LE(pla::sum(fit.I), mk.I_max + 1e-9);
    for (int probe = 0; probe < 20; ++probe) {
      auto I = pla::checks::uniform_vector(rng, mk.m, 0.0, 1.0);
      const double scale = pla::checks::uniform(rng, 0.0, mk.I_max) / pla::sum(I);
      for (auto & x : I) {x *= scale;}
      EXPECT_LE(fit.value, pla::aggregated_value(mk, agg, I) + 1e-9);
    }
  }
}

TEST(SaaArgmin, CuttingPlaneAgreesWithExtensiveForm)
{
  auto rng = pla::make_rng(43);
  for (int k = 0; k < 60; ++k) {
    const auto mk = pla::checks::random_market(rng);
    pla::AggregatedCost agg;
    agg.p = pla::checks::uniform(rng, 0.0, mk.p_max);
    const int count = 1 + static_cast<int>(rng() % 8);
    for (int s = 0; s < count; ++s) {
      agg.add(pla::checks::uniform_vector(rng, mk.n, 0.0, 6.0));
    }
    const auto a = pla::saa_argmin_inventory_extensive(mk, agg);
    const auto b = pla::saa_argmin_inventory_cutting_plane(mk, agg);
    EXPECT_NEAR(a.value, b.value, 1e-8 * (1.0 + std::abs(a.value)));
  }
}

TEST(SaaArgmin, ManyScenariosUseCuttingPlanes)
{
  const auto mk = one_by_one(0.31, 2.0);
  pla::AggregatedCost agg;
  agg.p = 1.0;
  for (int k = 0; k < 60; ++k) {
    agg.add({0.5 + k / 60.0});
  }
  const auto fit = pla::saa_argmin_inventory(mk, agg);
  // Newsvendor quantile: smallest atom with P(D <= x) >= (p - gamma) / p = 0.69.
  EXPECT_NEAR(fit.I[0], 0.5 + 41.0 / 60.0, 1e-9);
  EXPECT_NEAR(fit.value, pla::saa_argmin_inventory_extensive(mk, agg).value, 1e-9);
}

TEST(ExactQ, NoiselessClosedForm)
{
  const auto mk = one_by_one(0.0, 1.0);
  const auto dm = noiseless(1.0, 1.0);
  for (double p : {0.0, 0.2, 0.5, 0.9}) {
    for (double I : {0.0, 0.3, 0.7, 1.0}) {
      EXPECT_NEAR(pla::exact_Q(mk, dm, {I}, p), -p * std::min(I, 1.0 - p), 1e-12);
    }
  }
}

TEST(ExactQ, TwoAtomExample)
{
  const auto mk = one_by_one(0.3);
  const auto dm = two_point(2.0, 1.0, 0.5);
  EXPECT_NEAR(pla::exact_Q(mk, dm, {1.5}, 1.0), -0.55, 1e-12);
  EXPECT_NEAR(pla::exact_Q(mk, dm, {0.0}, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(pla::exact_Q(mk, dm, {0.0}, 0.3), 0.0, 1e-12);
}

TEST(ExactQ, RejectsContinuousNoise)
{
  const auto mk = one_by_one(0.3);
  pla::DemandModel dm{{2}, {1}, pla::TruncatedGaussianNoise{{0.3}, {-0.5}, {0.5}}};
  EXPECT_THROW(pla::exact_Q(mk, dm, {1.0}, 0.5), std::invalid_argument);
  EXPECT_THROW(pla::exact_W(mk, dm, 0.5), std::invalid_argument);
}

TEST(MonteCarloQ, AgreesWithExactOracle)
{
  const auto mk = one_by_one(0.3);
  const auto dm = two_point(2.0, 1.0, 0.5);
  auto rng = pla::make_rng(47);
  const auto est = pla::monte_carlo_Q(mk, dm, {1.2}, 1.0, 100000, rng);
  EXPECT_LE(std::abs(est.mean - pla::exact_Q(mk, dm, {1.2}, 1.0)), 4.0 * est.std_error);
}

TEST(MonteCarloQ, ZeroVarianceModel)
{
  const auto mk = one_by_one(0.3);
  const auto dm = noiseless(1.5, 1.0);
  auto rng = pla::make_rng(53);
  const auto est = pla::monte_carlo_Q(mk, dm, {1.0}, 0.8, 500, rng);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_NEAR(est.mean, pla::exact_Q(mk, dm, {1.0}, 0.8), 1e-12);
}

TEST(MonteCarloQ, StandardErrorShrinksWithSamples)
{
  const auto mk = one_by_one(0.3);
  const auto dm = two_point(2.0, 1.0, 0.5);
  auto rng = pla::make_rng(59);
  const auto small = pla::monte_carlo_Q(mk, dm, {1.2}, 1.0, 100, rng);
  const auto large = pla::monte_carlo_Q(mk, dm, {1.2}, 1.0, 10000, rng);
  const double ratio = small.std_error / large.std_error;
  EXPECT_GT(ratio, 7.0);
  EXPECT_LT(ratio, 13.0);
  EXPECT_THROW(pla::monte_carlo_Q(mk, dm, {1.2}, 1.0, 99, rng), std::invalid_argument);
}

TEST(ExactW, NoiselessClosedFormOnGrid)
{
  for (double g : {0.0, 0.3, 0.7}) {
    const auto mk = one_by_one(g, 1.0);
    const auto dm = noiseless(1.0, 1.0);
    for (int k = 0; k <= 100; ++k) {
      const double p = k / 100.0;
      EXPECT_NEAR(pla::exact_W(mk, dm, p).value, std::min(0.0, (g - p) * (1.0 - p)), 1e-9);
    }
  }
}

TEST(ExactW, Examples)
{
  EXPECT_NEAR(pla::exact_W(one_by_one(0.0, 1.0), noiseless(1.0, 1.0), 0.5).value, -0.25, 1e-12);
  EXPECT_NEAR(pla::exact_W(one_by_one(0.3), two_point(2.0, 1.0, 0.5), 1.0).value, -0.55, 1e-12);
}

TEST(ExactW, BelowEveryProbeInventory)
{
  auto rng = pla::make_rng(61);
  for (int k = 0; k < 30; ++k) {
    const auto mk = pla::checks::random_market(rng);
    const auto dm = pla::checks::random_finite_model(rng, mk);
    const double p = pla::checks::uniform(rng, 0.0, mk.p_max);
    const double W = pla::exact_W(mk, dm, p).value;
    for (int probe = 0; probe < 10; ++probe) {
      auto I = pla::checks::uniform_vector(rng, mk.m, 0.0, 1.0);
      const double scale = pla::checks::uniform(rng, 0.0, mk.I_max) / pla::sum(I);
      for (auto & x : I) {x *= scale;}
      EXPECT_LE(W, pla::exact_Q(mk, dm, I, p) + 1e-9);
    }
  }
}

TEST(ExactW, SingleEdgeWithoutHoldingCostIsPiecewiseConvex)
{
  const auto rep = pla::checks::optimistic_cost_piecewise_convex(30, 67, 10, 1, true);
  EXPECT_TRUE(rep.passed()) << rep.summary();
}

TEST(ExactW, LipschitzBoundHolds)
{
  pla::Rng rng = pla::make_rng(68);
  for (int k = 0; k < 20; ++k) {
    auto mk = pla::checks::random_market(rng, 2);
    const auto dm = pla::checks::random_finite_model(rng, mk);
    mk.a_max = std::max(mk.a_max, *std::max_element(dm.a.begin(), dm.a.end()));
    const double L = pla::default_lipschitz(mk);
    for (int q = 0; q < 10; ++q) {
      const double p1 = pla::checks::uniform(rng, 0.0, mk.p_max);
      const double p2 = pla::checks::uniform(rng, 0.0, mk.p_max);
      EXPECT_LE(std::abs(pla::exact_W(mk, dm, p1).value - pla::exact_W(mk, dm, p2).value),
        L * std::abs(p1 - p2) + 1e-9);
    }
  }
}

TEST(ExactW, HoldingCostKinksInsideAnInterval)
{
  // W = min(0, (0.3 - p)(1 - p)) on the single interval [0, 1].
  const auto mk = one_by_one(0.3);
  const auto dm = noiseless(1.0, 1.0);
  auto W = [&](double p) {return pla::exact_W(mk, dm, p).value;};
  EXPECT_NEAR(W(0.0), 0.0, 1e-9);
  EXPECT_NEAR(W(0.3), 0.0, 1e-9);
  EXPECT_NEAR(W(0.6), -0.12, 1e-9);
  EXPECT_NEAR(pla::checks::midpoint_convexity_violation(W, 0.0, 0.6, 3), 0.06, 1e-9);
}

TEST(GlobalOptimum, QuadraticVertex)
{
  const auto res = pla::global_optimum(one_by_one(0.0, 1.0), noiseless(1.0, 1.0));
  EXPECT_NEAR(res.p_star, 0.5, 1e-6);
  EXPECT_NEAR(res.W_star, -0.25, 1e-9);
}

TEST(GlobalOptimum, ShiftedVertexMatchesGridSearch)
{
  const auto mk = one_by_one(0.3, 1.0);
  const auto dm = noiseless(1.0, 1.0);
  const auto res = pla::global_optimum(mk, dm);
  // Independent 1e-6 grid search on the closed form.
  double best_p = 0.0, best_w = 0.0;
  for (int k = 0; k <= 1000000; ++k) {
    const double p = k * 1e-6;
    const double w = std::min(0.0, (0.3 - p) * (1.0 - p));
    if (w < best_w) {
      best_w = w;
      best_p = p;
    }
  }
  EXPECT_NEAR(best_p, 0.65, 1e-6);
  EXPECT_NEAR(res.p_star, best_p, 2e-6);
  EXPECT_NEAR(res.W_star, best_w, 1e-9);
  EXPECT_NEAR(res.W_star, -0.1225, 1e-9);
}

TEST(GlobalOptimum, KeepsEveryIntervalAndPicksTheBest)
{
  pla::MarketParams mk;
  mk.m = 1;
  mk.n = 2;
  mk.gamma = {0.0};
  mk.C = pla::Matrix{{0.0, 2.0}};
  mk.p_max = 4.0;
  mk.I_max = 4.0;
  mk.gamma_max = mk.a_max = 4.0;
  mk.b_max = 1.0;
  pla::DemandModel dm{{4.0, 4.0}, {1.0, 1.0}, pla::FiniteSupportNoise{{{{0.0, 0.0}, 1.0}}}};
  const auto res = pla::global_optimum(mk, dm);
  ASSERT_EQ(res.per_interval.size(), 3u);
  double best = pla::kInf;
  for (const auto & iv : res.per_interval) {
    EXPECT_GE(iv.p, iv.lo);
    EXPECT_LE(iv.p, iv.hi);
    best = std::min(best, iv.W);
  }
  EXPECT_EQ(res.W_star, best);
  EXPECT_GE(res.p_star, 0.0);
  EXPECT_LE(res.p_star, mk.p_max);
}

TEST(GlobalOptimum, GoldenSectionWithinGridMinimum)
{
  auto rng = pla::make_rng(71);
  for (int k = 0; k < 3; ++k) {
    auto mk = pla::checks::random_market(rng, 2);
    const auto dm = pla::checks::random_finite_model(rng, mk);
    const auto res = pla::global_optimum(mk, dm);
    for (const auto & iv : res.per_interval) {
      double grid_min = pla::kInf;
      const int points = 10000;
      for (int q = 0; q <= points; ++q) {
        const double p = iv.lo + (iv.hi - iv.lo) * q / points;
        grid_min = std::min(grid_min, pla::exact_W(mk, dm, p).value);
      }
      const double L = pla::default_lipschitz(mk);
      // Golden section is at least as good as the grid, up to its own tolerance.
      EXPECT_LE(iv.W, grid_min + L * 1e-6 * mk.p_max + 1e-9);
      EXPECT_GE(iv.W, grid_min - L * (iv.hi - iv.lo) / points - 1e-9);
    }
  }
}
