#pragma once

#include <cstdint>
#include <vector>

#include "nashflow/finite_game.h"
#include "nashflow/learners.h"
#include "nashflow/repeated_game.h"

namespace nashflow::netapps {

struct RoutingEdge {
  int from = 0;
  int to = 0;
  double success = 1.0;  // q in (0, 1]
  double delay = 0.0;    // tau >= 0
};

struct RoutingInstance {
  int num_nodes = 0;
  std::vector<RoutingEdge> edges;  // undirected
  int source = 0;
  int destination = 0;
  int max_paths = 8;
  // Feasible node set of every jammer; the coalition picks one node per jammer.
  std::vector<std::vector<int>> jammer_nodes;
  double tradeoff = 0.0;     // lambda
  double degradation = 0.1;  // delta: success multiplier on hops next to a jammed node
};

void ValidateRoutingInstance(const RoutingInstance& inst);

// Five-node network with three routes; one jammer sits on the middle node of
// the fastest route.
RoutingInstance DemoRoutingInstance();

// Up to k loopless source-destination paths in nondecreasing total delay.
std::vector<std::vector<int>> ShortestPaths(const RoutingInstance& inst, int k);

struct RoutingGame {
  FiniteGame game;                           // player 0 routes, player 1 jams
  std::vector<std::vector<int>> paths;       // router action -> node sequence
  std::vector<std::vector<int>> jam_actions; // jammer action -> jammed nodes
};

// Router payoff sum over hops of (ln q' - lambda tau), where q' is q scaled by
// the degradation factor when a hop touches a jammed node. Zero-sum.
// Throws ResourceError when paths x joint jammer positions exceeds 1e6.
RoutingGame BuildRoutingGame(const RoutingInstance& inst);

double PathPayoff(const RoutingInstance& inst, const std::vector<int>& path,
                  const std::vector<int>& jammed);

struct RoutingRun {
  RoutingGame routing;
  Trajectory trajectory;
  std::vector<double> final_path_distribution;
  std::vector<double> empirical_path_frequency;
  // Final probability mass on paths that avoid every node the jammer coalition
  // plays with probability >= 0.5.
  double mass_avoiding_jammers = 0.0;
};

// Router and jammers run the given learner under individual feedback.
RoutingRun RunSecureRouting(const RoutingInstance& inst, const LearnerConfig& learner,
                            std::int64_t rounds, std::uint64_t seed);

}  // namespace nashflow::netapps
