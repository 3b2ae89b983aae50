#include "nashflow/markov_game.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "nashflow/errors.h"

namespace nashflow {
namespace {

struct InducedChain {
  Eigen::MatrixXd transition;  // |S| x |S|
  Eigen::MatrixXd reward;      // |S| x N
};

InducedChain Induce(const MarkovGame& game, const StationaryPolicy& policy) {
  const int ns = game.num_states();
  const int np = game.num_players();
  InducedChain c{Eigen::MatrixXd::Zero(ns, ns), Eigen::MatrixXd::Zero(ns, np)};
  const auto& counts = game.action_counts();
  for (int s = 0; s < ns; ++s) {
    std::vector<int> joint(np, 0);
    for (std::int64_t f = 0; f < game.num_joint_actions(); ++f) {
      double w = 1.0;
      for (int j = 0; j < np; ++j) w *= policy[s][j][joint[j]];
      if (w != 0.0) {
        const Simplex& next = game.transition(s, f);
        for (int t = 0; t < ns; ++t) c.transition(s, t) += w * next[t];
        for (int i = 0; i < np; ++i) c.reward(s, i) += w * game.payoff(i, s, f);
      }
      for (int j = np - 1; j >= 0; --j) {
        if (++joint[j] < counts[j]) break;
        joint[j] = 0;
      }
    }
  }
  return c;
}

}  // namespace

MarkovGame::MarkovGame(int num_states, std::vector<int> action_counts,
                       std::vector<std::vector<Simplex>> transitions,
                       std::vector<std::vector<std::vector<double>>> payoffs,
                       double discount)
    : num_states_(num_states),
      action_counts_(std::move(action_counts)),
      transitions_(std::move(transitions)),
      payoffs_(std::move(payoffs)),
      discount_(discount) {
  if (num_states_ <= 0) throw InvalidInputError("markov game needs at least one state");
  if (!(discount_ >= 0.0 && discount_ < 1.0)) {
    throw InvalidInputError("discount must lie in [0, 1), got " + std::to_string(discount_));
  }
  if (action_counts_.empty()) throw InvalidInputError("markov game needs players");
  num_joint_ = 1;
  for (int m : action_counts_) {
    if (m <= 0) throw InvalidInputError("action counts must be positive");
    num_joint_ *= m;
  }
  if (static_cast<int>(transitions_.size()) != num_states_) {
    throw InvalidInputError("transition table must have one row block per state");
  }
  for (const auto& per_state : transitions_) {
    if (static_cast<std::int64_t>(per_state.size()) != num_joint_) {
      throw InvalidInputError("transition table must cover every joint action");
    }
    for (const auto& row : per_state) {
      if (static_cast<int>(row.size()) != num_states_) {
        throw InvalidInputError("transition row has wrong state count");
      }
    }
  }
  if (payoffs_.size() != action_counts_.size()) {
    throw InvalidInputError("need one payoff table per player");
  }
  for (const auto& per_player : payoffs_) {
    if (static_cast<int>(per_player.size()) != num_states_) {
      throw InvalidInputError("payoff table must cover every state");
    }
    for (const auto& row : per_player) {
      if (static_cast<std::int64_t>(row.size()) != num_joint_) {
        throw InvalidInputError("payoff row must cover every joint action");
      }
      for (double v : row) {
        if (!std::isfinite(v)) throw InvalidInputError("payoffs must be finite");
        max_abs_payoff_ = std::max(max_abs_payoff_, std::abs(v));
      }
    }
  }
}

std::vector<double> MarkovValue(const MarkovGame& game, const StationaryPolicy& policy,
                                int state, double tol, ValueMethod method) {
  if (!(tol > 0.0)) throw InvalidInputError("tolerance must be positive");
  if (state < 0 || state >= game.num_states()) {
    throw InvalidInputError("state index out of range");
  }
  if (static_cast<int>(policy.size()) != game.num_states()) {
    throw InvalidInputError("policy must give a profile for every state");
  }
  for (const auto& profile : policy) {
    if (static_cast<int>(profile.size()) != game.num_players()) {
      throw InvalidInputError("policy profile has wrong player count");
    }
    for (int j = 0; j < game.num_players(); ++j) {
      if (static_cast<int>(profile[j].size()) != game.action_counts()[j]) {
        throw InvalidInputError("policy strategy has wrong dimension");
      }
    }
  }
  const double gamma = game.discount();
  const int np = game.num_players();
  if (gamma == 0.0) return std::vector<double>(np, 0.0);

  if (method == ValueMethod::kAuto) {
    method = game.num_states() * game.num_joint_actions() <= 10'000
                 ? ValueMethod::kLinearSolve
                 : ValueMethod::kTruncated;
  }
  const InducedChain chain = Induce(game, policy);
  std::vector<double> out(np);

  if (method == ValueMethod::kLinearSolve) {
    const int ns = game.num_states();
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(ns, ns) - gamma * chain.transition;
    Eigen::MatrixXd v = gamma * a.partialPivLu().solve(chain.reward);
    for (int i = 0; i < np; ++i) out[i] = v(state, i);
    return out;
  }

  // Tail after T stages is bounded by gamma^(T+1) * u_max / (1 - gamma).
  const double umax = std::max(game.max_abs_payoff(), 1e-300);
  long long horizon = 1;
  if (umax * gamma / (1.0 - gamma) >= tol) {
    horizon = static_cast<long long>(
        std::ceil(std::log(tol * (1.0 - gamma) / umax) / std::log(gamma)));
    horizon = std::max(horizon, 1LL);
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(game.num_states(), np);
  for (long long k = 0; k < horizon; ++k) {
    v = gamma * (chain.reward + chain.transition * v);
  }
  for (int i = 0; i < np; ++i) out[i] = v(state, i);
  return out;
}

}  // namespace nashflow
