#include "nashflow/netapps/grid.h"

#include <cmath>

#include <gtest/gtest.h>

#include "nashflow/equilibrium.h"
#include "nashflow/errors.h"
#include "oracles.h"

using namespace nashflow;
using namespace nashflow::netapps;

namespace {

GridInstance ThreeBus() {
  GridInstance inst;
  inst.s = {{0.3, 0.1, 0.05}, {0.1, 0.3, 0.1}, {0.05, 0.1, 0.3}};
  inst.load = {1.0, 1.2, 0.8};
  inst.cap = {3.0, 3.0, 3.0};
  inst.unit_cost = {0.9, 0.85, 0.95};
  inst.price = 1.0;
  inst.weight = {2.0, 2.5, 2.2};
  return inst;
}

// Interior equilibrium: every bus sits at theta_i = (c - c_i) / (r_i^2 s_ii).
std::vector<double> InteriorEquilibrium(const GridInstance& inst) {
  const int n = inst.num_buses();
  std::vector<double> target(n);
  for (int i = 0; i < n; ++i) {
    target[i] = (inst.price - inst.unit_cost[i]) /
                (inst.weight[i] * inst.weight[i] * inst.s[i][i]);
  }
  auto x = oracle::GaussSolve(inst.s, target);
  for (int i = 0; i < n; ++i) x[i] += inst.load[i];
  return x;
}

}  // namespace

TEST(Grid, IsolatedBusBalancesLoad) {
  GridInstance inst;
  inst.s = {{1.0}};
  inst.load = {1.0};
  inst.cap = {5.0};
  inst.unit_cost = {1.0};
  inst.weight = {1.0};
  EXPECT_DOUBLE_EQ(GridBestResponse(inst, 0, 0.0), 1.0);
  const auto run = RunGrid(inst, GridAlgorithm::kPua, 10, 0);
  EXPECT_TRUE(run.converged);
  EXPECT_DOUBLE_EQ(run.iterates.back()[0], 1.0);
  inst.cap = {0.5};
  EXPECT_DOUBLE_EQ(GridBestResponse(inst, 0, 0.0), 0.5);
}

TEST(Grid, GradientMatchesFiniteDifference) {
  const auto inst = ThreeBus();
  const std::vector<double> p{0.7, 1.1, 0.4};
  for (int i = 0; i < 3; ++i) {
    auto f = [&](const std::vector<double>& x) {
      auto q = p;
      q[i] = x[0];
      return GridUtility(inst, q, i);
    };
    EXPECT_NEAR(GridGradient(inst, p, i), oracle::FiniteDiff(f, {p[i]})[0], 1e-8);
  }
}

TEST(Grid, BestResponseMaximizesUtility) {
  const auto inst = ThreeBus();
  const std::vector<double> p{0.7, 1.1, 0.4};
  const auto theta = PhaseAngles(inst, p);
  for (int i = 0; i < 3; ++i) {
    const double br = GridBestResponseFromTheta(inst, i, theta[i], p[i]);
    auto q = p;
    q[i] = br;
    const double best = GridUtility(inst, q, i);
    for (double x = 0.0; x <= inst.cap[i]; x += 0.01) {
      q[i] = x;
      EXPECT_LE(GridUtility(inst, q, i), best + 1e-12);
    }
  }
}

TEST(Grid, ThreeBusConvergesToInteriorEquilibrium) {
  const auto inst = ThreeBus();
  const auto ne = InteriorEquilibrium(inst);
  for (int i = 0; i < 3; ++i) {
    ASSERT_GT(ne[i], 0.0);
    ASSERT_LT(ne[i], inst.cap[i]);
  }
  for (auto algo : {GridAlgorithm::kPua, GridAlgorithm::kRua, GridAlgorithm::kPda}) {
    const auto run = RunGrid(inst, algo, 200, 5, algo == GridAlgorithm::kRua ? 0.5 : 0.0);
    EXPECT_TRUE(run.converged) << GridAlgorithmName(algo);
    EXPECT_LE(run.ne_residual, 1e-8);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(run.iterates.back()[i], ne[i], 1e-8);
  }
}

TEST(Grid, SyntheticInstancesMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = SyntheticGrid(6, seed % 2 ? GridTopology::kChain : GridTopology::kRing, seed);
    const auto ne = InteriorEquilibrium(inst);
    bool interior = true;
    for (int i = 0; i < 6; ++i) interior &= ne[i] > 0.0 && ne[i] < inst.cap[i];
    EXPECT_TRUE(interior) << "seed " << seed;
    const auto run = RunGrid(inst, GridAlgorithm::kPua, 5000, seed);
    ASSERT_TRUE(run.converged);
    if (interior) {
      for (int i = 0; i < 6; ++i) EXPECT_NEAR(run.iterates.back()[i], ne[i], 1e-8);
    }
  }
}

TEST(Grid, RuaWithoutHoldingIsPua) {
  const auto inst = SyntheticGrid(5, GridTopology::kRing, 9);
  const auto pua = RunGrid(inst, GridAlgorithm::kPua, 50, 1);
  const auto rua = RunGrid(inst, GridAlgorithm::kRua, 50, 1, 0.0);
  EXPECT_EQ(pua.iterates, rua.iterates);
}

TEST(Grid, PdaNeedsNoForeignReads) {
  const auto inst = ThreeBus();
  const auto pda = RunGrid(inst, GridAlgorithm::kPda, 50, 1);
  const auto pua = RunGrid(inst, GridAlgorithm::kPua, 50, 1);
  EXPECT_EQ(pda.foreign_reads, 0);
  EXPECT_GT(pua.foreign_reads, 0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(pda.iterates.back()[i], pua.iterates.back()[i], 1e-12);
}

TEST(Grid, RuaIsSeedDeterministic) {
  const auto inst = SyntheticGrid(4, GridTopology::kChain, 2);
  const auto a = RunGrid(inst, GridAlgorithm::kRua, 40, 7, 0.5, 0.0);
  const auto b = RunGrid(inst, GridAlgorithm::kRua, 40, 7, 0.5, 0.0);
  const auto c = RunGrid(inst, GridAlgorithm::kRua, 40, 8, 0.5, 0.0);
  EXPECT_EQ(a.iterates, b.iterates);
  EXPECT_NE(a.iterates, c.iterates);
}

TEST(Grid, Rejections) {
  auto inst = ThreeBus();
  inst.weight[1] = 0.0;
  EXPECT_THROW(ValidateGridInstance(inst), ConfigError);
  try {
    RunGrid(inst, GridAlgorithm::kPua, 1, 0);
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].rfind("/weight/1", 0), 0u);
  }
  inst = ThreeBus();
  inst.s[2][2] = 0.0;
  EXPECT_THROW(BuildGridGame(inst), ConfigError);
  inst = ThreeBus();
  inst.cap.pop_back();
  EXPECT_THROW(ValidateGridInstance(inst), InvalidInputError);
  EXPECT_THROW(RunGrid(ThreeBus(), GridAlgorithm::kRua, 5, 0, 1.0), InvalidInputError);
}
