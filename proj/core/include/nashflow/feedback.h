#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nashflow/player_graph.h"
#include "nashflow/random.h"
#include "nashflow/simplex.h"

namespace nashflow {

// Smallest probability of a sampled action for which an importance weight is
// computed.
inline constexpr double kDefaultProbabilityFloor = 1e-6;

enum class FeedbackScope { kGlobal, kLocal, kIndividual };

// Which players' actions and payoffs a player observes.
struct FeedbackKind {
  FeedbackScope scope = FeedbackScope::kIndividual;
  std::optional<PlayerGraph> graph;  // required for kLocal

  static FeedbackKind Global() { return {FeedbackScope::kGlobal, std::nullopt}; }
  static FeedbackKind Individual() { return {FeedbackScope::kIndividual, std::nullopt}; }
  static FeedbackKind Local(PlayerGraph g) { return {FeedbackScope::kLocal, std::move(g)}; }
};

void ValidateFeedbackKind(const FeedbackKind& kind, int num_players);

// Sorted list of players visible to `player`.
std::vector<int> VisiblePlayers(const FeedbackKind& kind, int player, int num_players);

// Temporal availability of past rounds at round k. A delay of m hides the
// latest m rounds; a window of w keeps only the latest w of the remaining
// rounds. Zero disables either filter. Delay is applied before the window.
struct TemporalFilter {
  int window = 0;
  int delay = 0;

  static TemporalFilter Perfect() { return {}; }
  static TemporalFilter Windowed(int m) { return {m, 0}; }
  static TemporalFilter Delayed(int m) { return {0, m}; }

  bool is_perfect() const { return window == 0 && delay == 0; }
};

void ValidateTemporalFilter(const TemporalFilter& filter);

// Inclusive 1-based range [first, last] of rounds visible at round k; empty
// when first > last.
struct RoundRange {
  std::int64_t first = 1;
  std::int64_t last = 0;
  bool empty() const { return first > last; }
};
RoundRange VisibleRounds(const TemporalFilter& filter, std::int64_t k);

enum class NoiseKind { kNone, kUniform, kGaussianTruncated };

// Zero-mean bounded additive payoff noise.
struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double half_width = 0.0;  // kUniform
  double sigma = 0.0;       // kGaussianTruncated
  double clip = 0.0;        // kGaussianTruncated: noise clamped to [-clip, clip]

  static NoiseModel None() { return {}; }
  static NoiseModel Uniform(double half_width) {
    return {NoiseKind::kUniform, half_width, 0.0, 0.0};
  }
  static NoiseModel GaussianTruncated(double sigma, double clip) {
    return {NoiseKind::kGaussianTruncated, 0.0, sigma, clip};
  }
};

void ValidateNoiseModel(const NoiseModel& noise);

// u + xi with xi drawn from `noise`. Returns u unchanged for kNone without
// consuming randomness.
double NoisyPayoff(double u, const NoiseModel& noise, Rng& rng);

// Everything that happened in one round of a repeated game.
struct RoundRecord {
  std::int64_t round = 0;  // 1-based
  std::vector<int> actions;
  std::vector<double> payoffs_raw;
  std::vector<double> payoffs_noisy;
  // Mixed strategies the actions were sampled from.
  Profile strategies;
};

// What one player sees of one round.
struct Observation {
  std::int64_t round = 0;
  std::vector<int> players;     // visible players, ascending
  std::vector<int> actions;     // aligned with players
  std::vector<double> payoffs;  // noisy payoffs, aligned with players
  int own_action = -1;
  double own_payoff = 0.0;
  // Mixed strategy the observer sampled its own action from.
  std::vector<double> own_strategy;
  // Full strategy profile of the round; populated only under global scope.
  std::optional<Profile> strategies;
};

Observation MakeObservation(const RoundRecord& record, int player,
                            const std::vector<int>& visible);

// Observations available to `player` after history.size() rounds.
std::vector<Observation> Observe(std::span<const RoundRecord> history, int player,
                                 const FeedbackKind& kind, const TemporalFilter& filter);

// Rounds that became visible and rounds that dropped out of view between
// round k-1 and round k.
struct FeedbackUpdate {
  std::vector<Observation> arrived;
  std::vector<Observation> expired;
};

FeedbackUpdate ObserveIncrement(std::span<const RoundRecord> history, int player,
                                const FeedbackKind& kind, const TemporalFilter& filter);

// U_hat(a) = 1{a = played} * U / pi(a). Throws VarianceGuardError when
// pi(played) < p_floor.
std::vector<double> ImportanceEstimate(int played, double payoff, const Simplex& pi,
                                       double p_floor = kDefaultProbabilityFloor);

}  // namespace nashflow
