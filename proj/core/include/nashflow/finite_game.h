#pragma once

#include <cstdint>
#include <vector>

#include "nashflow/random.h"
#include "nashflow/simplex.h"

namespace nashflow {

// Upper bound on the number of joint pure actions a dense game may hold.
inline constexpr std::int64_t kMaxJointActions = 10'000'000;

// N-player normal-form game with dense payoff tensors.
//
// Joint actions are flattened row-major with player 0 as the most significant
// index: flat = ((a_0 * m_1 + a_1) * m_2 + a_2) ...
class FiniteGame {
 public:
  // payoffs[i] holds player i's utilities, one per flattened joint action.
  FiniteGame(std::vector<int> action_counts,
             std::vector<std::vector<double>> payoffs);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(int player) const { return action_counts_.at(player); }
  const std::vector<int>& action_counts() const { return action_counts_; }
  std::int64_t num_joint_actions() const { return num_joint_; }

  double payoff(int player, const std::vector<int>& joint) const;
  double payoff(int player, std::int64_t flat) const {
    return payoffs_[player][flat];
  }
  const std::vector<double>& payoff_tensor(int player) const {
    return payoffs_.at(player);
  }

  std::int64_t FlatIndex(const std::vector<int>& joint) const;
  std::vector<int> JointAction(std::int64_t flat) const;

  // Stride of `player`'s index inside the flattened tensor.
  std::int64_t stride(int player) const { return strides_[player]; }

  bool IsZeroSum(double tol = 0.0) const;

 private:
  std::vector<int> action_counts_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::int64_t> strides_;
  std::int64_t num_joint_;
};

// Throws InvalidInputError unless `profile` has one simplex per player with
// matching dimension.
void ValidateProfile(const FiniteGame& game, const Profile& profile);

double ExpectedUtility(const FiniteGame& game, const Profile& profile, int player);

// u_i(., pi_{-i}): entry a is the expected utility of pure action a.
std::vector<double> UtilityVector(const FiniteGame& game, const Profile& profile,
                                  int player);

// As above for raw per-player probability vectors, which are not validated.
// Used where slightly-off-simplex points occur, such as integrator stages.
std::vector<double> UtilityVector(const FiniteGame& game,
                                  const std::vector<std::vector<double>>& mixed,
                                  int player);

// Utility vectors for every player, concatenated per player.
std::vector<std::vector<double>> JointUtilityVector(const FiniteGame& game,
                                                    const Profile& profile);

// u_i(., a_{-i}) against pure opponent actions; joint[player] is ignored.
std::vector<double> UtilityVectorAgainst(const FiniteGame& game,
                                         const std::vector<int>& joint, int player);

// Bundled games.
FiniteGame MatchingPennies();
FiniteGame PrisonersDilemma(double reward = 3, double sucker = 0,
                            double temptation = 5, double punishment = 1);
FiniteGame CoordinationGame(int actions = 2);
FiniteGame RockPaperScissors();

// Payoffs iid uniform in [lo, hi].
FiniteGame RandomGame(const std::vector<int>& action_counts, Rng& rng,
                      double lo = -1.0, double hi = 1.0);

// Exact potential game: every player's payoff equals a common potential with
// integer entries in [-range, range], re-drawn until every player has a strict
// preference between any two of its actions against any fixed opponent profile.
FiniteGame RandomPotentialGame(const std::vector<int>& action_counts, Rng& rng,
                               int range = 3);

// Two-player zero-sum game from the row player's matrix.
FiniteGame ZeroSumGame(const std::vector<std::vector<double>>& row_payoffs);

// Two-player game from row and column payoff matrices (indexed [row][col]).
FiniteGame BimatrixGame(const std::vector<std::vector<double>>& row_payoffs,
                        const std::vector<std::vector<double>>& col_payoffs);

}  // namespace nashflow
