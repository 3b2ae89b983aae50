#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nashflow/continuous_game.h"
#include "nashflow/feedback.h"
#include "nashflow/finite_game.h"
#include "nashflow/random.h"
#include "nashflow/response.h"
#include "nashflow/schedule.h"
#include "nashflow/simplex.h"

namespace nashflow {

enum class LearnerType { kFp, kBr, kSbr, kDa, kFtl, kGd, kLgd, kMd, kFtrl };

// How a finite-game learner turns its observations into a payoff estimate.
enum class Estimator {
  // Bandit: importance-weighted realized payoff of the played action.
  kImportance,
  // Realized payoff of every own action against the observed opponent actions.
  kCounterfactual,
  // Exact utility vector against the opponents' mixed strategies.
  kExpected,
};

// Config-file name ("fp", "br", ...) and the dynamics label ("FP", "BR-d", ...).
std::string LearnerTypeName(LearnerType type);
std::string DynamicsLabel(LearnerType type);
std::optional<LearnerType> ParseLearnerType(const std::string& name);
std::string EstimatorName(Estimator e);
std::optional<Estimator> ParseEstimator(const std::string& name);

bool IsContinuousLearner(LearnerType type);

struct LearnerConfig {
  LearnerType type = LearnerType::kDa;
  Regularizer regularizer{RegularizerKind::kEntropy, 0.1};
  Schedule mu = Schedule::InversePow(0.6);
  Schedule lambda = Schedule::InverseK();
  TieRule tie_rule = TieRule::kLowestIndex;
  Estimator estimator = Estimator::kImportance;
  double p_floor = kDefaultProbabilityFloor;
  std::optional<std::vector<double>> initial_strategy;
};

void ValidateLearnerConfig(const LearnerConfig& config);

// Score and strategy of one player in a finite game.
struct FiniteLearnerState {
  std::vector<double> score;
  Simplex strategy;
  std::int64_t round = 0;
  // Fictitious play only: empirical action counts of every player.
  std::vector<std::vector<std::int64_t>> counts;
  // Set when the last update mixed in uniform exploration at p_floor.
  bool floor_applied = false;
};

FiniteLearnerState InitialFiniteState(const FiniteGame& game, int player,
                                      const LearnerConfig& config);

// The choice maps below all receive the payoff estimate U_hat of round k and
// the round index k >= 1; rates are evaluated at k. Each returns the state
// after round k. Under the importance estimator vertex-valued or
// nearly-degenerate strategies are mixed with uniform at p_floor.

// u_hat <- (1-mu) u_hat + mu U_hat; pi <- (1-lambda) pi + lambda BR(previous u_hat).
FiniteLearnerState BrdStep(const FiniteLearnerState& s, std::span<const double> u_hat,
                           const LearnerConfig& config, std::int64_t k, Rng* tie_rng = nullptr);

// As BrdStep with the quantal response in place of the best response.
FiniteLearnerState SbrStep(const FiniteLearnerState& s, std::span<const double> u_hat,
                           const LearnerConfig& config, std::int64_t k);

// u_hat <- u_hat + weight * U_hat; pi = QR(u_hat). weight defaults to mu_k.
FiniteLearnerState DaStep(const FiniteLearnerState& s, std::span<const double> u_hat,
                          const LearnerConfig& config, std::int64_t k,
                          std::optional<double> weight = std::nullopt);

// Score as DaStep; pi = BR(u_hat).
FiniteLearnerState FtlStep(const FiniteLearnerState& s, std::span<const double> u_hat,
                           const LearnerConfig& config, std::int64_t k,
                           std::optional<double> weight = std::nullopt, Rng* tie_rng = nullptr);

// Adds `arrived` and removes `expired` observations from the empirical
// counts, then best-responds to the opponents' empirical mix. Throws
// FeedbackStructureError when an opponent's action is not visible.
FiniteLearnerState FpStep(const FiniteLearnerState& s, const FiniteGame& game, int player,
                          std::span<const Observation> arrived,
                          std::span<const Observation> expired, const LearnerConfig& config,
                          std::int64_t k, Rng* tie_rng = nullptr);

// Empirical mixed strategy of `of_player` from FP counts; uniform before any
// observation.
Simplex EmpiricalStrategy(const FiniteLearnerState& s, int of_player);

// Pure action and dual variable of one player in a continuous game.
struct ContinuousLearnerState {
  std::vector<double> action;
  std::vector<double> dual;
  std::int64_t round = 0;
};

// Initial action defaults to the mirror map of a zero dual (the regularizer
// minimizer); an explicit initial action sets the dual to its preimage.
ContinuousLearnerState InitialContinuousState(const ActionSet& set,
                                              const LearnerConfig& config);

// a <- P(a + mu D).
ContinuousLearnerState GdStep(const ContinuousLearnerState& s, std::span<const double> grad,
                              double mu, const ActionSet& set);
// Y <- Y + mu D; a = P(Y).
ContinuousLearnerState LgdStep(const ContinuousLearnerState& s, std::span<const double> grad,
                               double mu, const ActionSet& set);
// Y <- Y + mu D; a = argmax <Y, a> - eps h(a).
ContinuousLearnerState MdStep(const ContinuousLearnerState& s, std::span<const double> grad,
                              double mu, const Regularizer& reg, const ActionSet& set);
// Y <- Y + D; a = argmax <Y, a> - eps h(a).
ContinuousLearnerState FtrlStep(const ContinuousLearnerState& s, std::span<const double> grad,
                                const Regularizer& reg, const ActionSet& set);

// Dispatches to the step matching config.type at round k.
ContinuousLearnerState ContinuousStep(const ContinuousLearnerState& s,
                                      std::span<const double> grad,
                                      const LearnerConfig& config, const ActionSet& set,
                                      std::int64_t k);

}  // namespace nashflow
