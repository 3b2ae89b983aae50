#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nashflow/continuous_game.h"
#include "nashflow/feedback.h"
#include "nashflow/finite_game.h"
#include "nashflow/learners.h"

namespace nashflow {

struct FeedbackConfig {
  FeedbackKind kind = FeedbackKind::Individual();
  TemporalFilter temporal;
  NoiseModel noise;
};

// One player's slice of a trajectory row.
struct PlayerRound {
  int action = -1;  // -1 on the initial row
  double payoff_raw = 0.0;
  double payoff_noisy = 0.0;
  std::vector<double> strategy;
  bool floor_applied = false;
};

// rows[0] holds the initial strategies. rows[k] for k >= 1 holds the actions
// and payoffs of round k and the strategies after the round-k update, which
// are the ones sampled in round k + 1.
struct Trajectory {
  std::vector<int> action_counts;
  std::vector<std::vector<PlayerRound>> rows;
  std::vector<double> svi_residuals;  // one per row
  std::uint64_t seed = 0;
  std::vector<std::string> dynamics;  // per player
  std::string tie_selection;

  std::int64_t rounds() const { return static_cast<std::int64_t>(rows.size()) - 1; }
  int num_players() const { return static_cast<int>(action_counts.size()); }
  Profile ProfileAt(std::int64_t row) const;
};

// Plays `rounds` rounds with synchronous updates. All randomness is derived
// from `seed` per (purpose, player, round). Step failures are rethrown as
// RoundError carrying the round index.
Trajectory RunRepeatedGame(const FiniteGame& game, const std::vector<LearnerConfig>& learners,
                           const FeedbackConfig& feedback, std::int64_t rounds,
                           std::uint64_t seed);

// Mean of the strategies sampled in rounds 1..K; the initial strategies when
// K = 0. For fictitious play this is the empirical action frequency.
Profile TimeAveragedStrategies(const Trajectory& t);

Profile FinalProfile(const Trajectory& t);

struct ContinuousTrajectory {
  std::vector<JointPoint> actions;  // actions[0] is the initial point
  std::vector<double> ne_residuals;
};

// Gradient play with exact gradients for every player (gd, lgd, md, ftrl).
ContinuousTrajectory RunGradientPlay(const ContinuousGame& game,
                                     const std::vector<LearnerConfig>& learners,
                                     std::int64_t rounds);

}  // namespace nashflow
