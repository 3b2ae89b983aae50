#include "nashflow/learners.h"

#include <cmath>
#include <string>

#include "nashflow/errors.h"

namespace nashflow {
namespace {

struct TypeInfo {
  LearnerType type;
  const char* name;
  const char* label;
};

constexpr TypeInfo kTypes[] = {
    {LearnerType::kFp, "fp", "FP"},     {LearnerType::kBr, "br", "BR-d"},
    {LearnerType::kSbr, "sbr", "SBR-d"}, {LearnerType::kDa, "da", "DA-d"},
    {LearnerType::kFtl, "ftl", "FTL"},   {LearnerType::kGd, "gd", "GD"},
    {LearnerType::kLgd, "lgd", "LGD"},   {LearnerType::kMd, "md", "MD"},
    {LearnerType::kFtrl, "ftrl", "FTRL"},
};

const TypeInfo& Info(LearnerType type) {
  for (const auto& t : kTypes) {
    if (t.type == type) return t;
  }
  throw InvalidInputError("unknown learner type");
}

bool IsBandit(const LearnerConfig& c) { return c.estimator == Estimator::kImportance; }

// Applies exploration mixing under bandit feedback and records whether it fired.
void Finish(FiniteLearnerState& s, Simplex next, const LearnerConfig& config) {
  if (IsBandit(config)) {
    Simplex floored = EnsureFloor(next, config.p_floor);
    s.floor_applied = !(floored == next);
    s.strategy = std::move(floored);
  } else {
    s.floor_applied = false;
    s.strategy = std::move(next);
  }
}

void CheckEstimate(const FiniteLearnerState& s, std::span<const double> u_hat) {
  if (u_hat.size() != s.score.size()) {
    throw InvalidInputError("payoff estimate has length " + std::to_string(u_hat.size()) +
                            ", expected " + std::to_string(s.score.size()));
  }
  for (double v : u_hat) {
    if (!std::isfinite(v)) throw InvalidInputError("payoff estimate is not finite");
  }
}

void CheckGradient(const ContinuousLearnerState& s, std::span<const double> grad) {
  if (grad.size() != s.action.size()) throw InvalidInputError("gradient dimension mismatch");
  for (double v : grad) {
    if (!std::isfinite(v)) throw InvalidInputError("gradient is not finite");
  }
}

}  // namespace

std::string LearnerTypeName(LearnerType type) { return Info(type).name; }
std::string DynamicsLabel(LearnerType type) { return Info(type).label; }

std::optional<LearnerType> ParseLearnerType(const std::string& name) {
  for (const auto& t : kTypes) {
    if (name == t.name) return t.type;
  }
  return std::nullopt;
}

std::string EstimatorName(Estimator e) {
  switch (e) {
    case Estimator::kImportance:
      return "importance";
    case Estimator::kCounterfactual:
      return "counterfactual";
    case Estimator::kExpected:
      return "expected";
  }
  return "importance";
}

std::optional<Estimator> ParseEstimator(const std::string& name) {
  for (Estimator e : {Estimator::kImportance, Estimator::kCounterfactual, Estimator::kExpected}) {
    if (name == EstimatorName(e)) return e;
  }
  return std::nullopt;
}

bool IsContinuousLearner(LearnerType type) {
  return type == LearnerType::kGd || type == LearnerType::kLgd || type == LearnerType::kMd ||
         type == LearnerType::kFtrl;
}

void ValidateLearnerConfig(const LearnerConfig& config) {
  ValidateRegularizer(config.regularizer);
  ValidateSchedule(config.mu, false);
  ValidateSchedule(config.lambda, true);
  if (!(config.p_floor > 0.0 && config.p_floor < 1.0)) {
    throw InvalidInputError("p_floor must lie in (0, 1)");
  }
}

FiniteLearnerState InitialFiniteState(const FiniteGame& game, int player,
                                      const LearnerConfig& config) {
  ValidateLearnerConfig(config);
  const int m = game.num_actions(player);
  if (config.p_floor * m >= 1.0) throw InvalidInputError("p_floor too large for action count");
  Simplex pi = Simplex::Uniform(m);
  if (config.initial_strategy) {
    if (static_cast<int>(config.initial_strategy->size()) != m) {
      throw InvalidInputError("initial strategy of player " + std::to_string(player) +
                              " has wrong dimension");
    }
    pi = Simplex(*config.initial_strategy);
  }
  FiniteLearnerState s{std::vector<double>(m, 0.0), std::move(pi), 0, {}, false};
  if (config.type == LearnerType::kFp) {
    for (int j = 0; j < game.num_players(); ++j) {
      s.counts.emplace_back(game.num_actions(j), 0);
    }
  }
  return s;
}

FiniteLearnerState BrdStep(const FiniteLearnerState& s, std::span<const double> u_hat,
                           const LearnerConfig& config, std::int64_t k, Rng* tie_rng) {
  CheckEstimate(s, u_hat);
  const double mu = config.mu.value(k);
  const double lambda = config.lambda.value(k);
  FiniteLearnerState next = s;
  const Simplex br = BestResponse(s.score, config.tie_rule, tie_rng);
  for (std::size_t a = 0; a < s.score.size(); ++a) {
    next.score[a] = (1.0 - mu) * s.score[a] + mu * u_hat[a];
  }
  next.round = k;
  Finish(next, lambda == 0.0 ? s.strategy : Mix(s.strategy, br, lambda), config);
  return next;
}

FiniteLearnerState SbrStep(const FiniteLearnerState& s, std::span<const double> u_hat,
                           const LearnerConfig& config, std::int64_t k) {
  CheckEstimate(s, u_hat);
  const double mu = config.mu.value(k);
  const double lambda = config.lambda.value(k);
  FiniteLearnerState next = s;
  const Simplex qr = QuantalResponse(s.score, config.regularizer);
  for (std::size_t a = 0; a < s.score.size(); ++a) {
    next.score[a] = (1.0 - mu) * s.score[a] + mu * u_hat[a];
  }
  next.round = k;
  Finish(next, lambda == 0.0 ? s.strategy : Mix(s.strategy, qr, lambda), config);
  return next;
}

FiniteLearnerState DaStep(const FiniteLearnerState& s, std::span<const double> u_hat,
                          const LearnerConfig& config, std::int64_t k,
                          std::optional<double> weight) {
  CheckEstimate(s, u_hat);
  const double mu = weight ? *weight : config.mu.value(k);
  FiniteLearnerState next = s;
  for (std::size_t a = 0; a < s.score.size(); ++a) next.score[a] += mu * u_hat[a];
  next.round = k;
  Finish(next, QuantalResponse(next.score, config.regularizer), config);
  return next;
}

FiniteLearnerState FtlStep(const FiniteLearnerState& s, std::span<const double> u_hat,
                           const LearnerConfig& config, std::int64_t k,
                           std::optional<double> weight, Rng* tie_rng) {
  CheckEstimate(s, u_hat);
  const double mu = weight ? *weight : config.mu.value(k);
  FiniteLearnerState next = s;
  for (std::size_t a = 0; a < s.score.size(); ++a) next.score[a] += mu * u_hat[a];
  next.round = k;
  Finish(next, BestResponse(next.score, config.tie_rule, tie_rng), config);
  return next;
}

Simplex EmpiricalStrategy(const FiniteLearnerState& s, int of_player) {
  const auto& c = s.counts.at(of_player);
  std::int64_t total = 0;
  for (auto v : c) total += v;
  if (total == 0) return Simplex::Uniform(c.size());
  std::vector<double> p(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) {
    p[a] = static_cast<double>(c[a]) / static_cast<double>(total);
  }
  return Simplex(std::move(p));
}

FiniteLearnerState FpStep(const FiniteLearnerState& s, const FiniteGame& game, int player,
                          std::span<const Observation> arrived,
                          std::span<const Observation> expired, const LearnerConfig& config,
                          std::int64_t k, Rng* tie_rng) {
  if (static_cast<int>(s.counts.size()) != game.num_players()) {
    throw InvalidInputError("fictitious play state has no empirical counts");
  }
  FiniteLearnerState next = s;
  next.round = k;
  auto apply = [&](const Observation& o, int delta) {
    if (static_cast<int>(o.players.size()) != game.num_players()) {
      throw FeedbackStructureError("fictitious play of player " + std::to_string(player) +
                                   " needs every opponent's action");
    }
    for (std::size_t idx = 0; idx < o.players.size(); ++idx) {
      next.counts[o.players[idx]][o.actions[idx]] += delta;
    }
  };
  for (const auto& o : arrived) apply(o, +1);
  for (const auto& o : expired) apply(o, -1);

  Profile empirical;
  for (int j = 0; j < game.num_players(); ++j) {
    std::int64_t total = 0;
    for (auto v : next.counts[j]) total += v;
    if (j != player && total == 0) {
      next.floor_applied = false;
      return next;
    }
    empirical.push_back(EmpiricalStrategy(next, j));
  }
  const auto u = UtilityVector(game, empirical, player);
  next.strategy = BestResponse(u, config.tie_rule, tie_rng);
  next.floor_applied = false;
  return next;
}

ContinuousLearnerState InitialContinuousState(const ActionSet& set,
                                              const LearnerConfig& config) {
  ValidateLearnerConfig(config);
  const int d = Dimension(set);
  ContinuousLearnerState s;
  if (!config.initial_strategy) {
    s.dual.assign(d, 0.0);
    if (config.type == LearnerType::kGd || config.type == LearnerType::kLgd) {
      s.action = EuclideanProject(s.dual, set);
      s.dual = s.action;
    } else {
      s.action = MirrorMap(s.dual, config.regularizer, set);
    }
    return s;
  }
  s.action = *config.initial_strategy;
  if (!IsFeasible(set, s.action)) throw DomainError("initial action is infeasible");
  switch (config.type) {
    case LearnerType::kGd:
    case LearnerType::kLgd:
      s.dual = s.action;
      break;
    case LearnerType::kMd:
    case LearnerType::kFtrl:
      s.dual.resize(d);
      for (int k = 0; k < d; ++k) {
        if (config.regularizer.kind == RegularizerKind::kEntropy) {
          if (s.action[k] <= 0.0) {
            throw DomainError("entropic mirror map cannot start on the boundary");
          }
          s.dual[k] = config.regularizer.epsilon * std::log(s.action[k]);
        } else {
          s.dual[k] = config.regularizer.epsilon * s.action[k];
        }
      }
      break;
    default:
      throw InvalidInputError("not a continuous-game learner");
  }
  return s;
}

ContinuousLearnerState GdStep(const ContinuousLearnerState& s, std::span<const double> grad,
                              double mu, const ActionSet& set) {
  CheckGradient(s, grad);
  ContinuousLearnerState next = s;
  std::vector<double> x(s.action);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += mu * grad[k];
  next.action = EuclideanProject(x, set);
  next.dual = next.action;
  next.round = s.round + 1;
  return next;
}

ContinuousLearnerState LgdStep(const ContinuousLearnerState& s, std::span<const double> grad,
                               double mu, const ActionSet& set) {
  CheckGradient(s, grad);
  ContinuousLearnerState next = s;
  for (std::size_t k = 0; k < next.dual.size(); ++k) next.dual[k] += mu * grad[k];
  next.action = EuclideanProject(next.dual, set);
  next.round = s.round + 1;
  return next;
}

ContinuousLearnerState MdStep(const ContinuousLearnerState& s, std::span<const double> grad,
                              double mu, const Regularizer& reg, const ActionSet& set) {
  CheckGradient(s, grad);
  ContinuousLearnerState next = s;
  for (std::size_t k = 0; k < next.dual.size(); ++k) next.dual[k] += mu * grad[k];
  next.action = MirrorMap(next.dual, reg, set);
  next.round = s.round + 1;
  return next;
}

ContinuousLearnerState FtrlStep(const ContinuousLearnerState& s, std::span<const double> grad,
                                const Regularizer& reg, const ActionSet& set) {
  CheckGradient(s, grad);
  ContinuousLearnerState next = s;
  for (std::size_t k = 0; k < next.dual.size(); ++k) next.dual[k] += grad[k];
  next.action = MirrorMap(next.dual, reg, set);
  next.round = s.round + 1;
  return next;
}

ContinuousLearnerState ContinuousStep(const ContinuousLearnerState& s,
                                      std::span<const double> grad,
                                      const LearnerConfig& config, const ActionSet& set,
                                      std::int64_t k) {
  switch (config.type) {
    case LearnerType::kGd:
      return GdStep(s, grad, config.mu.value(k), set);
    case LearnerType::kLgd:
      return LgdStep(s, grad, config.mu.value(k), set);
    case LearnerType::kMd:
      return MdStep(s, grad, config.mu.value(k), config.regularizer, set);
    case LearnerType::kFtrl:
      return FtrlStep(s, grad, config.regularizer, set);
    default:
      throw InvalidInputError(LearnerTypeName(config.type) +
                              " is not a continuous-game learner");
  }
}

}  // namespace nashflow
