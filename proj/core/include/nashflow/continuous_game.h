#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "nashflow/finite_game.h"

namespace nashflow {

struct BoxSet {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct SimplexSet {
  int dim = 0;
};

// Affine hyperplane {x : <normal, x> = offset}. Unbounded, so only usable with
// learners that never need a compact set (GD/LGD comparisons, for instance).
struct HyperplaneSet {
  std::vector<double> normal;
  double offset = 0.0;
};

using ActionSet = std::variant<BoxSet, SimplexSet, HyperplaneSet>;

int Dimension(const ActionSet& set);
bool IsFeasible(const ActionSet& set, const std::vector<double>& x,
                double tol = 1e-9);
void ValidateActionSet(const ActionSet& set);

// One pure action vector per player.
using JointPoint = std::vector<std::vector<double>>;

using UtilityFn = std::function<double(const JointPoint&, int player)>;
// Returns D_i(a) = grad_{a_i} u_i(a) for every player.
using GradientFn = std::function<JointPoint(const JointPoint&)>;

class ContinuousGame {
 public:
  ContinuousGame(std::vector<ActionSet> sets, UtilityFn utility, GradientFn gradient);

  int num_players() const { return static_cast<int>(sets_.size()); }
  const ActionSet& action_set(int player) const { return sets_.at(player); }
  const std::vector<ActionSet>& action_sets() const { return sets_; }

  double Utility(const JointPoint& a, int player) const;

  bool IsFeasible(const JointPoint& a, double tol = 1e-9) const;

 private:
  friend JointPoint PayoffGradient(const ContinuousGame&, const JointPoint&);
  std::vector<ActionSet> sets_;
  UtilityFn utility_;
  GradientFn gradient_;
};

// D(a). Throws DomainError when a is infeasible and InvalidInputError when the
// evaluator returns a gradient of the wrong shape.
JointPoint PayoffGradient(const ContinuousGame& game, const JointPoint& a);

// The game over mixed strategies: actions live on simplices, u_i is the
// multilinear expected utility and D_i is the utility vector.
ContinuousGame MixedExtension(const FiniteGame& game);

// u_i(a) = <b_i, a_i> + <a_i, sum_j C_ij a_j> - 0.5 * q_i ||a_i||^2 on given sets.
// With q_i = 0 every utility is affine in the player's own action.
struct QuadraticGameSpec {
  std::vector<ActionSet> sets;
  std::vector<std::vector<double>> linear;                 // b_i
  std::vector<std::vector<std::vector<double>>> coupling;  // C_ij flattened row-major
  std::vector<double> curvature;                           // q_i
};
ContinuousGame QuadraticGame(const QuadraticGameSpec& spec);

}  // namespace nashflow
