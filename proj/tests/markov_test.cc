#include "nashflow/markov_game.h"

#include <gtest/gtest.h>

#include "nashflow/errors.h"
#include "oracles.h"

using namespace nashflow;

namespace {

// Random game over `states` with two players of two actions each.
MarkovGame RandomChain(int states, double gamma, Rng& rng) {
  std::vector<std::vector<Simplex>> trans(states);
  std::vector<std::vector<std::vector<double>>> pay(2, std::vector<std::vector<double>>(states));
  for (int s = 0; s < states; ++s) {
    for (int f = 0; f < 4; ++f) {
      trans[s].emplace_back(oracle::RandomPoint(states, rng));
      for (int i = 0; i < 2; ++i) pay[i][s].push_back(2 * rng.Uniform() - 1);
    }
  }
  return MarkovGame(states, {2, 2}, trans, pay, gamma);
}

// (I - gamma P) v = gamma r on the induced chain.
std::vector<double> OracleValue(const MarkovGame& g, const StationaryPolicy& pol, int player) {
  const int n = g.num_states();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (int s = 0; s < n; ++s) {
    a[s][s] = 1.0;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const double w = pol[s][0][x] * pol[s][1][y];
        const int f = 2 * x + y;
        b[s] += g.discount() * w * g.payoff(player, s, f);
        for (int t = 0; t < n; ++t) a[s][t] -= g.discount() * w * g.transition(s, f)[t];
      }
    }
  }
  return oracle::GaussSolve(a, b);
}

}  // namespace

TEST(MarkovValue, SingleAbsorbingState) {
  MarkovGame g(1, {1}, {{Simplex({1.0})}}, {{{1.0}}}, 0.9);
  const StationaryPolicy pol{{Simplex({1.0})}};
  EXPECT_NEAR(MarkovValue(g, pol, 0, 1e-10)[0], 9.0, 1e-9);
  EXPECT_NEAR(MarkovValue(g, pol, 0, 1e-10, ValueMethod::kTruncated)[0], 9.0, 2e-10);
}

TEST(MarkovValue, ZeroDiscount) {
  Rng rng(1);
  const auto g = RandomChain(3, 0.0, rng);
  const StationaryPolicy pol(3, UniformProfile({2, 2}));
  for (int s = 0; s < 3; ++s) {
    EXPECT_EQ(MarkovValue(g, pol, s, 1e-9), (std::vector<double>{0.0, 0.0}));
  }
}

TEST(MarkovValue, MatchesLinearSystemOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = RandomChain(2 + trial % 3, 0.95, rng);
    StationaryPolicy pol;
    for (int s = 0; s < g.num_states(); ++s) {
      pol.push_back(ToProfile(oracle::RandomProfile({2, 2}, rng)));
    }
    const double tol = 1e-8;
    for (int i = 0; i < 2; ++i) {
      const auto ref = OracleValue(g, pol, i);
      for (int s = 0; s < g.num_states(); ++s) {
        const double lin = MarkovValue(g, pol, s, tol, ValueMethod::kLinearSolve)[i];
        const double tr = MarkovValue(g, pol, s, tol, ValueMethod::kTruncated)[i];
        EXPECT_NEAR(lin, ref[s], 1e-10);
        EXPECT_NEAR(tr, lin, 2 * tol);
      }
    }
  }
}

TEST(MarkovGame, RejectsBadInput) {
  EXPECT_THROW(MarkovGame(1, {1}, {{Simplex({1.0})}}, {{{1.0}}}, 1.0), InvalidInputError);
  EXPECT_THROW(MarkovGame(1, {1}, {{Simplex({0.5, 0.5})}}, {{{1.0}}}, 0.5), InvalidInputError);
}
