#include <cmath>

#include <gtest/gtest.h>

#include "pla/checks.hpp"
#include "pla/transport.hpp"
#include "pla/vertex_oracle.hpp"

using pla::Matrix;

TEST(SolveAllocation, ProfitableSingleEdgeShipsEverything)
{
  const auto r = pla::solve_allocation({1}, {1}, 1.0, Matrix{{0}});
  EXPECT_NEAR(r.X(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(r.objective, -1.0, 1e-12);
}

TEST(SolveAllocation, UnprofitableEdgeShipsNothing)
{
  const auto r = pla::solve_allocation({1}, {1}, 0.5, Matrix{{1}});
  EXPECT_NEAR(r.X(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
  const auto [lambda, eta] = pla::extract_duals(r);
  EXPECT_NEAR(lambda[0], 0.0, 1e-12);
  EXPECT_NEAR(eta[0], 0.0, 1e-12);
}

TEST(SolveAllocation, BeatsGreedyByCost)
{
  const Matrix C{{1, 2}, {3, 10}};
  const auto r = pla::solve_allocation({1, 1}, {1, 1}, 5.0, C);
  EXPECT_NEAR(r.objective, -5.0, 1e-12);
  EXPECT_NEAR(r.X(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(r.X(1, 0), 1.0, 1e-12);
  EXPECT_NEAR(r.X(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(r.X(1, 1), 0.0, 1e-12);
  EXPECT_NEAR(pla::brute_force_allocation({1, 1}, {1, 1}, 5.0, C), -5.0, 1e-12);
}

TEST(SolveAllocation, OneEdgeDualCertificate)
{
  const auto r = pla::solve_allocation({1}, {1}, 1.0, Matrix{{0}});
  EXPECT_GE(r.lambda[0], 0.0);
  EXPECT_GE(r.eta[0], 0.0);
  EXPECT_NEAR(r.lambda[0] + r.eta[0], 1.0, 1e-12);
  EXPECT_NEAR(pla::dual_objective(r, {1}, {1}), -1.0, 1e-12);
}

TEST(BruteForce, ReproducesExamples)
{
  EXPECT_NEAR(pla::brute_force_allocation({1}, {1}, 1.0, Matrix{{0}}), -1.0, 1e-12);
  EXPECT_NEAR(pla::brute_force_allocation({1}, {1}, 0.5, Matrix{{1}}), 0.0, 1e-12);
}

TEST(BruteForce, EmptyInventoryOrDemand)
{
  const Matrix C{{0, 1}, {2, 0.5}};
  EXPECT_EQ(pla::brute_force_allocation({0, 0}, {3, 1}, 4.0, C), 0.0);
  EXPECT_EQ(pla::brute_force_allocation({2, 1}, {0, 0}, 4.0, C), 0.0);
  EXPECT_NEAR(pla::solve_allocation({0, 0}, {3, 1}, 4.0, C).objective, 0.0, 1e-12);
  EXPECT_NEAR(pla::solve_allocation({2, 1}, {0, 0}, 4.0, C).objective, 0.0, 1e-12);
}

TEST(BruteForce, RejectsLargeInstances)
{
  const Matrix C(2, 5);
  EXPECT_THROW(pla::brute_force_allocation({1, 1}, {1, 1, 1, 1, 1}, 1.0, C),
    std::invalid_argument);
}

TEST(SolveAllocation, DualsNonnegative)
{
  auto rng = pla::make_rng(5);
  for (int k = 0; k < 300; ++k) {
    const auto mk = pla::checks::random_market(rng);
    const auto I = pla::checks::uniform_vector(rng, mk.m, 0.0, 4.0);
    const auto D = pla::checks::uniform_vector(rng, mk.n, 0.0, 4.0);
    const auto r = pla::solve_allocation(I, D, pla::checks::uniform(rng, 0, mk.p_max), mk.C);
    for (double l : r.lambda) {EXPECT_GE(l, -1e-12);}
    for (double e : r.eta) {EXPECT_GE(e, -1e-12);}
    EXPECT_LE(r.objective, 1e-12);
  }
}

TEST(SolveAllocation, MatchesOracleWithDualCertificate)
{
  const auto rep = pla::checks::transport_oracle_equivalence(300, 17);
  EXPECT_TRUE(rep.passed()) << rep.summary();
}

TEST(SolveAllocation, JointlyConvexInCapacities)
{
  const auto rep = pla::checks::allocation_joint_convexity(200, 19);
  EXPECT_TRUE(rep.passed()) << rep.summary();
}

TEST(SolveAllocation, MonotoneInCapacities)
{
  auto rng = pla::make_rng(23);
  for (int k = 0; k < 300; ++k) {
    const auto mk = pla::checks::random_market(rng);
    auto I = pla::checks::uniform_vector(rng, mk.m, 0.0, 4.0);
    auto D = pla::checks::uniform_vector(rng, mk.n, 0.0, 4.0);
    const double p = pla::checks::uniform(rng, 0.0, mk.p_max);
    const double g = pla::allocation_value(I, D, p, mk.C);
    auto I2 = I;
    I2[rng() % mk.m] += pla::checks::uniform(rng, 0.0, 2.0);
    auto D2 = D;
    D2[rng() % mk.n] += pla::checks::uniform(rng, 0.0, 2.0);
    EXPECT_LE(pla::allocation_value(I2, D, p, mk.C), g + 1e-9);
    EXPECT_LE(pla::allocation_value(I, D2, p, mk.C), g + 1e-9);
  }
}

TEST(SolveAllocation, PositivelyHomogeneousInCapacities)
{
  auto rng = pla::make_rng(29);
  for (int k = 0; k < 300; ++k) {
    const auto mk = pla::checks::random_market(rng);
    auto I = pla::checks::uniform_vector(rng, mk.m, 0.0, 4.0);
    auto D = pla::checks::uniform_vector(rng, mk.n, 0.0, 4.0);
    const double p = pla::checks::uniform(rng, 0.0, mk.p_max);
    const double alpha = pla::checks::uniform(rng, 0.0, 5.0);
    const double g = pla::allocation_value(I, D, p, mk.C);
    for (auto & x : I) {x *= alpha;}
    for (auto & x : D) {x *= alpha;}
    EXPECT_NEAR(pla::allocation_value(I, D, p, mk.C), alpha * g, 1e-9 * (1.0 + std::abs(g)));
  }
}

TEST(SolveAllocation, DegenerateTiesTerminate)
{
  // All costs equal, integer capacities: heavy degeneracy.
  const Matrix C{{2, 2, 2}, {2, 2, 2}, {2, 2, 2}};
  const auto r = pla::solve_allocation({1, 1, 1}, {1, 1, 1}, 3.0, C);
  EXPECT_NEAR(r.objective, -3.0, 1e-12);
  const auto z = pla::solve_allocation({1, 1, 1}, {1, 1, 1}, 2.0, C);
  EXPECT_NEAR(z.objective, 0.0, 1e-12);
}
