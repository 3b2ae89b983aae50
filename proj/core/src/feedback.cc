#include "nashflow/feedback.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nashflow/errors.h"

namespace nashflow {

void ValidateFeedbackKind(const FeedbackKind& kind, int num_players) {
  if (kind.scope != FeedbackScope::kLocal) return;
  if (!kind.graph) throw InvalidInputError("local feedback requires a player graph");
  if (kind.graph->num_nodes() != num_players) {
    throw InvalidInputError("player graph has " + std::to_string(kind.graph->num_nodes()) +
                            " nodes for " + std::to_string(num_players) + " players");
  }
}

std::vector<int> VisiblePlayers(const FeedbackKind& kind, int player, int num_players) {
  if (player < 0 || player >= num_players) {
    throw InvalidInputError("player index out of range");
  }
  switch (kind.scope) {
    case FeedbackScope::kGlobal: {
      std::vector<int> all(num_players);
      for (int j = 0; j < num_players; ++j) all[j] = j;
      return all;
    }
    case FeedbackScope::kLocal: {
      ValidateFeedbackKind(kind, num_players);
      std::vector<int> out = kind.graph->neighbors(player);
      out.push_back(player);
      std::sort(out.begin(), out.end());
      return out;
    }
    case FeedbackScope::kIndividual:
      break;
  }
  return {player};
}

void ValidateTemporalFilter(const TemporalFilter& filter) {
  if (filter.window < 0 || filter.delay < 0) {
    throw InvalidInputError("window and delay must be nonnegative");
  }
}

RoundRange VisibleRounds(const TemporalFilter& filter, std::int64_t k) {
  RoundRange r{1, k - filter.delay};
  if (filter.window > 0) r.first = std::max<std::int64_t>(1, r.last - filter.window + 1);
  return r;
}

void ValidateNoiseModel(const NoiseModel& noise) {
  switch (noise.kind) {
    case NoiseKind::kNone:
      return;
    case NoiseKind::kUniform:
      if (!(noise.half_width >= 0.0) || !std::isfinite(noise.half_width)) {
        throw InvalidInputError("uniform noise half width must be finite and >= 0");
      }
      return;
    case NoiseKind::kGaussianTruncated:
      if (!(noise.sigma >= 0.0) || !(noise.clip >= 0.0) || !std::isfinite(noise.sigma) ||
          !std::isfinite(noise.clip)) {
        throw InvalidInputError("gaussian noise needs finite sigma >= 0 and clip >= 0");
      }
      return;
  }
}

double NoisyPayoff(double u, const NoiseModel& noise, Rng& rng) {
  switch (noise.kind) {
    case NoiseKind::kNone:
      return u;
    case NoiseKind::kUniform:
      return u + noise.half_width * (2.0 * rng.Uniform() - 1.0);
    case NoiseKind::kGaussianTruncated: {
      std::normal_distribution<double> normal(0.0, noise.sigma);
      // Clamping is symmetric, so the noise stays zero-mean.
      return u + std::clamp(normal(rng), -noise.clip, noise.clip);
    }
  }
  return u;
}

Observation MakeObservation(const RoundRecord& record, int player,
                            const std::vector<int>& visible) {
  Observation o;
  o.round = record.round;
  o.players = visible;
  for (int j : visible) {
    o.actions.push_back(record.actions[j]);
    o.payoffs.push_back(record.payoffs_noisy[j]);
  }
  o.own_action = record.actions[player];
  o.own_payoff = record.payoffs_noisy[player];
  o.own_strategy = record.strategies[player].values();
  if (static_cast<int>(visible.size()) == static_cast<int>(record.actions.size())) {
    o.strategies = record.strategies;
  }
  return o;
}

std::vector<Observation> Observe(std::span<const RoundRecord> history, int player,
                                 const FeedbackKind& kind, const TemporalFilter& filter) {
  ValidateTemporalFilter(filter);
  std::vector<Observation> out;
  if (history.empty()) return out;
  const int n = static_cast<int>(history.front().actions.size());
  const auto visible = VisiblePlayers(kind, player, n);
  const RoundRange r = VisibleRounds(filter, static_cast<std::int64_t>(history.size()));
  for (std::int64_t t = r.first; t <= r.last; ++t) {
    out.push_back(MakeObservation(history[t - 1], player, visible));
  }
  return out;
}

FeedbackUpdate ObserveIncrement(std::span<const RoundRecord> history, int player,
                                const FeedbackKind& kind, const TemporalFilter& filter) {
  ValidateTemporalFilter(filter);
  FeedbackUpdate up;
  if (history.empty()) return up;
  const int n = static_cast<int>(history.front().actions.size());
  const auto visible = VisiblePlayers(kind, player, n);
  const auto k = static_cast<std::int64_t>(history.size());
  const RoundRange now = VisibleRounds(filter, k);
  const RoundRange before = VisibleRounds(filter, k - 1);
  for (std::int64_t t = std::max(now.first, before.last + 1); t <= now.last; ++t) {
    up.arrived.push_back(MakeObservation(history[t - 1], player, visible));
  }
  if (!before.empty()) {
    for (std::int64_t t = before.first; t < now.first && t <= before.last; ++t) {
      up.expired.push_back(MakeObservation(history[t - 1], player, visible));
    }
  }
  return up;
}

std::vector<double> ImportanceEstimate(int played, double payoff, const Simplex& pi,
                                       double p_floor) {
  if (played < 0 || played >= static_cast<int>(pi.size())) {
    throw InvalidInputError("played action out of range");
  }
  const double p = pi[played];
  if (!(p >= p_floor) || p == 0.0) {
    throw VarianceGuardError("probability " + std::to_string(p) + " of action " +
                             std::to_string(played) + " is below the floor " +
                             std::to_string(p_floor));
  }
  std::vector<double> est(pi.size(), 0.0);
  est[played] = payoff / p;
  return est;
}

}  // namespace nashflow
