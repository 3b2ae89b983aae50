#include "nashflow/repeated_game.h"

#include <string>

#include "nashflow/equilibrium.h"
#include "nashflow/errors.h"

namespace nashflow {
namespace {

std::vector<double> Estimate(const FiniteGame& game, int player, const Observation& o,
                             const LearnerConfig& config) {
  switch (config.estimator) {
    case Estimator::kImportance:
      return ImportanceEstimate(o.own_action, o.own_payoff, Simplex(o.own_strategy),
                                config.p_floor);
    case Estimator::kCounterfactual: {
      if (static_cast<int>(o.players.size()) != game.num_players()) {
        throw FeedbackStructureError("counterfactual estimate of player " +
                                     std::to_string(player) +
                                     " needs every opponent's action");
      }
      const auto u = UtilityVectorAgainst(game, o.actions, player);
      const double noise = o.own_payoff - u[o.own_action];
      std::vector<double> est(u);
      for (double& v : est) v += noise;
      return est;
    }
    case Estimator::kExpected:
      if (!o.strategies) {
        throw FeedbackStructureError("expected-utility estimate of player " +
                                     std::to_string(player) +
                                     " needs every opponent's strategy");
      }
      return UtilityVector(game, *o.strategies, player);
  }
  return {};
}

FiniteLearnerState Update(const FiniteGame& game, int player, const FiniteLearnerState& s,
                          const FeedbackUpdate& up, const LearnerConfig& config,
                          const TemporalFilter& filter, std::int64_t k, Rng& tie_rng) {
  if (config.type == LearnerType::kFp) {
    return FpStep(s, game, player, up.arrived, up.expired, config, k, &tie_rng);
  }
  FiniteLearnerState next = s;
  next.round = k;
  const bool cumulative = config.type == LearnerType::kDa || config.type == LearnerType::kFtl;
  if (cumulative) {
    // Windowed cumulative scores drop the contribution an expiring round added
    // when it arrived.
    for (const auto& o : up.expired) {
      const double w = -config.mu.value(o.round + filter.delay);
      const auto est = Estimate(game, player, o, config);
      next = config.type == LearnerType::kDa
                 ? DaStep(next, est, config, k, w)
                 : FtlStep(next, est, config, k, w, &tie_rng);
    }
  }
  for (const auto& o : up.arrived) {
    const auto est = Estimate(game, player, o, config);
    switch (config.type) {
      case LearnerType::kBr:
        next = BrdStep(next, est, config, k, &tie_rng);
        break;
      case LearnerType::kSbr:
        next = SbrStep(next, est, config, k);
        break;
      case LearnerType::kDa:
        next = DaStep(next, est, config, k);
        break;
      case LearnerType::kFtl:
        next = FtlStep(next, est, config, k, std::nullopt, &tie_rng);
        break;
      default:
        throw InvalidInputError(LearnerTypeName(config.type) +
                                " cannot play a finite repeated game");
    }
  }
  return next;
}

}  // namespace

Profile Trajectory::ProfileAt(std::int64_t row) const {
  Profile p;
  for (const auto& pr : rows.at(row)) p.emplace_back(pr.strategy);
  return p;
}

Trajectory RunRepeatedGame(const FiniteGame& game, const std::vector<LearnerConfig>& learners,
                           const FeedbackConfig& feedback, std::int64_t rounds,
                           std::uint64_t seed) {
  const int n = game.num_players();
  if (static_cast<int>(learners.size()) != n) {
    throw InvalidInputError("need one learner config per player");
  }
  if (rounds < 0) throw InvalidInputError("round count must be nonnegative");
  ValidateFeedbackKind(feedback.kind, n);
  ValidateTemporalFilter(feedback.temporal);
  ValidateNoiseModel(feedback.noise);

  std::vector<FiniteLearnerState> states;
  Trajectory traj;
  traj.action_counts = game.action_counts();
  traj.seed = seed;
  traj.tie_selection = "lowest_index";
  for (int i = 0; i < n; ++i) {
    if (IsContinuousLearner(learners[i].type)) {
      throw InvalidInputError(LearnerTypeName(learners[i].type) +
                              " is a continuous-game learner");
    }
    states.push_back(InitialFiniteState(game, i, learners[i]));
    traj.dynamics.push_back(DynamicsLabel(learners[i].type));
    if (learners[i].tie_rule == TieRule::kUniformOverArgmax) {
      traj.tie_selection = "uniform_over_argmax";
    }
  }

  auto record_row = [&](const std::vector<PlayerRound>& row) {
    traj.rows.push_back(row);
    traj.svi_residuals.push_back(SviResidual(game, traj.ProfileAt(traj.rows.size() - 1)).residual);
  };

  std::vector<PlayerRound> row(n);
  for (int i = 0; i < n; ++i) row[i].strategy = states[i].strategy.values();
  traj.rows.reserve(rounds + 1);
  traj.svi_residuals.reserve(rounds + 1);
  record_row(row);

  std::vector<RoundRecord> history;
  history.reserve(rounds);
  for (std::int64_t k = 1; k <= rounds; ++k) {
    try {
      RoundRecord rec;
      rec.round = k;
      rec.actions.resize(n);
      for (int i = 0; i < n; ++i) {
        Rng r = PlayerStream(seed, StreamPurpose::kActionSample, i, k);
        rec.actions[i] = r.Categorical(states[i].strategy.values());
        rec.strategies.push_back(states[i].strategy);
      }
      const std::int64_t flat = game.FlatIndex(rec.actions);
      for (int i = 0; i < n; ++i) {
        const double raw = game.payoff(i, flat);
        Rng r = PlayerStream(seed, StreamPurpose::kPayoffNoise, i, k);
        rec.payoffs_raw.push_back(raw);
        rec.payoffs_noisy.push_back(NoisyPayoff(raw, feedback.noise, r));
      }
      history.push_back(std::move(rec));

      std::vector<FiniteLearnerState> next;
      next.reserve(n);
      for (int i = 0; i < n; ++i) {
        const auto up = ObserveIncrement(history, i, feedback.kind, feedback.temporal);
        Rng tie = PlayerStream(seed, StreamPurpose::kTieBreak, i, k);
        next.push_back(Update(game, i, states[i], up, learners[i], feedback.temporal, k, tie));
      }
      states = std::move(next);

      const RoundRecord& last = history.back();
      for (int i = 0; i < n; ++i) {
        row[i].action = last.actions[i];
        row[i].payoff_raw = last.payoffs_raw[i];
        row[i].payoff_noisy = last.payoffs_noisy[i];
        row[i].strategy = states[i].strategy.values();
        row[i].floor_applied = states[i].floor_applied;
      }
      record_row(row);
    } catch (const RoundError&) {
      throw;
    } catch (const Error& e) {
      throw RoundError(e.what(), k);
    }
  }
  return traj;
}

Profile TimeAveragedStrategies(const Trajectory& t) {
  const std::int64_t k = t.rounds();
  const std::int64_t count = k == 0 ? 1 : k;
  Profile out;
  for (int i = 0; i < t.num_players(); ++i) {
    std::vector<double> avg(t.action_counts[i], 0.0);
    for (std::int64_t r = 0; r < count; ++r) {
      const auto& s = t.rows[r][i].strategy;
      for (std::size_t a = 0; a < avg.size(); ++a) avg[a] += s[a];
    }
    for (double& v : avg) v /= static_cast<double>(count);
    out.emplace_back(std::move(avg));
  }
  return out;
}

Profile FinalProfile(const Trajectory& t) { return t.ProfileAt(t.rounds()); }

ContinuousTrajectory RunGradientPlay(const ContinuousGame& game,
                                     const std::vector<LearnerConfig>& learners,
                                     std::int64_t rounds) {
  const int n = game.num_players();
  if (static_cast<int>(learners.size()) != n) {
    throw InvalidInputError("need one learner config per player");
  }
  std::vector<ContinuousLearnerState> states;
  JointPoint a;
  for (int i = 0; i < n; ++i) {
    if (!IsContinuousLearner(learners[i].type)) {
      throw InvalidInputError(LearnerTypeName(learners[i].type) +
                              " is not a continuous-game learner");
    }
    states.push_back(InitialContinuousState(game.action_set(i), learners[i]));
    a.push_back(states.back().action);
  }
  ContinuousTrajectory out;
  out.actions.push_back(a);
  out.ne_residuals.push_back(ContinuousNeResidual(game, a).residual);
  for (std::int64_t k = 1; k <= rounds; ++k) {
    try {
      const JointPoint d = PayoffGradient(game, a);
      for (int i = 0; i < n; ++i) {
        states[i] = ContinuousStep(states[i], d[i], learners[i], game.action_set(i), k);
        a[i] = states[i].action;
      }
      out.actions.push_back(a);
      out.ne_residuals.push_back(ContinuousNeResidual(game, a).residual);
    } catch (const Error& e) {
      throw RoundError(e.what(), k);
    }
  }
  return out;
}

}  // namespace nashflow
