#pragma once

#include <cstdint>
#include <vector>

namespace nashflow::netapps {

// Local least-squares data of one learning node.
struct DmlNode {
  std::vector<std::vector<double>> features;  // n x d
  std::vector<double> targets;                // n
};

// Node i maximizes u_i = -L_i(theta_i) - C_i with
//   L_i = ||X_i theta_i - y_i||^2 / (2 n_i),
//   C_i = alpha * sum_j e_ij ||theta_i - theta_j||^2 + beta * ||e_i||^2.
struct DmlInstance {
  std::vector<DmlNode> nodes;
  int dim = 1;
  double alpha = 1.0;        // consensus weight
  double beta = 0.1;         // link maintenance weight
  double inner_step = 0.1;   // mirror-descent step on theta
  double outer_step = 0.05;  // projected gradient step on e
  double initial_weight = 0.5;
  double inner_tol = 1e-6;   // gradient-norm stop for the inner loop
};

void ValidateDmlInstance(const DmlInstance& inst);

// Nodes with data drawn around a shared ground-truth parameter.
DmlInstance SyntheticDml(int nodes, int dim, int samples, std::uint64_t seed,
                         double noise = 0.1);

// Links with weight below this are dropped from the communication graph.
inline constexpr double kDmlPruneThreshold = 1e-3;

struct DmlResult {
  std::vector<std::vector<double>> theta;
  // e[i][j] is node i's weight on the link to j; e[i][i] is unused and zero.
  std::vector<std::vector<double>> e;
  // Sum of utilities after each outer iteration, starting with the initial state.
  std::vector<double> total_utility;
  // Outer iterations at which total utility decreased.
  std::vector<int> utility_decreases;
  std::vector<int> inner_iterations;
};

double DmlUtility(const DmlInstance& inst, const std::vector<std::vector<double>>& theta,
                  const std::vector<std::vector<double>>& e, int node);

// Two-layer learning: inner mirror descent on theta over the pruned graph,
// then one projected gradient step on every e_i. Throws StepSizeError when
// the inner loop diverges.
DmlResult RunDml(const DmlInstance& inst, int inner_iters, int outer_iters, std::uint64_t seed);

// Per-node least-squares solution, the decoupled optimum.
std::vector<std::vector<double>> LocalLeastSquares(const DmlInstance& inst);

}  // namespace nashflow::netapps
