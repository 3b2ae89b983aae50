#pragma once

#include <cstdint>
#include <vector>

#include "nashflow/simplex.h"

namespace nashflow {

// Discounted stochastic game over a finite state set. Joint actions use the
// same row-major flattening as FiniteGame.
class MarkovGame {
 public:
  // transitions[s][flat] is a distribution over next states.
  // payoffs[i][s][flat] is player i's stage payoff.
  MarkovGame(int num_states, std::vector<int> action_counts,
             std::vector<std::vector<Simplex>> transitions,
             std::vector<std::vector<std::vector<double>>> payoffs, double discount);

  int num_states() const { return num_states_; }
  int num_players() const { return static_cast<int>(action_counts_.size()); }
  const std::vector<int>& action_counts() const { return action_counts_; }
  std::int64_t num_joint_actions() const { return num_joint_; }
  double discount() const { return discount_; }

  const Simplex& transition(int state, std::int64_t flat) const {
    return transitions_[state][flat];
  }
  double payoff(int player, int state, std::int64_t flat) const {
    return payoffs_[player][state][flat];
  }
  double max_abs_payoff() const { return max_abs_payoff_; }

 private:
  int num_states_;
  std::vector<int> action_counts_;
  std::int64_t num_joint_;
  std::vector<std::vector<Simplex>> transitions_;
  std::vector<std::vector<std::vector<double>>> payoffs_;
  double discount_;
  double max_abs_payoff_ = 0.0;
};

// One profile per state.
using StationaryPolicy = std::vector<Profile>;

enum class ValueMethod { kAuto, kLinearSolve, kTruncated };

// Per-player discounted value sum_{k>=1} gamma^k E[u_i(s^k, a^k)] from s^1 = state.
// The first stage is weighted gamma, so a single absorbing state paying 1 is
// worth gamma / (1 - gamma).
//
// kAuto solves the induced linear system when |S| * prod(m) <= 1e4 and falls
// back to truncated iteration otherwise.
std::vector<double> MarkovValue(const MarkovGame& game, const StationaryPolicy& policy,
                                int state, double tol,
                                ValueMethod method = ValueMethod::kAuto);

}  // namespace nashflow
