#include "nashflow/finite_game.h"

#include <cmath>
#include <string>

#include "nashflow/errors.h"

namespace nashflow {
namespace {

// Odometer over joint actions in flat order.
void Advance(std::vector<int>& joint, const std::vector<int>& counts) {
  for (int j = static_cast<int>(joint.size()) - 1; j >= 0; --j) {
    if (++joint[j] < counts[j]) return;
    joint[j] = 0;
  }
}

}  // namespace

FiniteGame::FiniteGame(std::vector<int> action_counts,
                       std::vector<std::vector<double>> payoffs)
    : action_counts_(std::move(action_counts)), payoffs_(std::move(payoffs)) {
  if (action_counts_.empty()) throw InvalidInputError("game needs at least one player");
  num_joint_ = 1;
  for (int m : action_counts_) {
    if (m <= 0) throw InvalidInputError("action counts must be positive");
    num_joint_ *= m;
    if (num_joint_ > kMaxJointActions) {
      throw ResourceError("joint action count exceeds " +
                          std::to_string(kMaxJointActions));
    }
  }
  if (payoffs_.size() != action_counts_.size()) {
    throw InvalidInputError("expected " + std::to_string(action_counts_.size()) +
                            " payoff tensors, got " + std::to_string(payoffs_.size()));
  }
  for (std::size_t i = 0; i < payoffs_.size(); ++i) {
    if (static_cast<std::int64_t>(payoffs_[i].size()) != num_joint_) {
      throw InvalidInputError("payoff tensor of player " + std::to_string(i) +
                              " has length " + std::to_string(payoffs_[i].size()) +
                              ", expected " + std::to_string(num_joint_));
    }
    for (double v : payoffs_[i]) {
      if (!std::isfinite(v)) throw InvalidInputError("payoff entries must be finite");
    }
  }
  strides_.assign(action_counts_.size(), 1);
  for (int j = static_cast<int>(action_counts_.size()) - 2; j >= 0; --j) {
    strides_[j] = strides_[j + 1] * action_counts_[j + 1];
  }
}

double FiniteGame::payoff(int player, const std::vector<int>& joint) const {
  return payoffs_.at(player)[FlatIndex(joint)];
}

std::int64_t FiniteGame::FlatIndex(const std::vector<int>& joint) const {
  if (joint.size() != action_counts_.size()) {
    throw InvalidInputError("joint action has wrong number of players");
  }
  std::int64_t flat = 0;
  for (std::size_t j = 0; j < joint.size(); ++j) {
    if (joint[j] < 0 || joint[j] >= action_counts_[j]) {
      throw InvalidInputError("action index out of range");
    }
    flat += joint[j] * strides_[j];
  }
  return flat;
}

std::vector<int> FiniteGame::JointAction(std::int64_t flat) const {
  std::vector<int> joint(action_counts_.size());
  for (std::size_t j = 0; j < joint.size(); ++j) {
    joint[j] = static_cast<int>(flat / strides_[j]);
    flat %= strides_[j];
  }
  return joint;
}

bool FiniteGame::IsZeroSum(double tol) const {
  for (std::int64_t f = 0; f < num_joint_; ++f) {
    double s = 0.0;
    for (const auto& t : payoffs_) s += t[f];
    if (std::abs(s) > tol) return false;
  }
  return true;
}

void ValidateProfile(const FiniteGame& game, const Profile& profile) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw InvalidInputError("profile has " + std::to_string(profile.size()) +
                            " strategies for " + std::to_string(game.num_players()) +
                            " players");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (static_cast<int>(profile[i].size()) != game.num_actions(i)) {
      throw InvalidInputError("strategy of player " + std::to_string(i) +
                              " has dimension " + std::to_string(profile[i].size()) +
                              ", expected " + std::to_string(game.num_actions(i)));
    }
  }
}

double ExpectedUtility(const FiniteGame& game, const Profile& profile, int player) {
  ValidateProfile(game, profile);
  const auto& tensor = game.payoff_tensor(player);
  std::vector<int> joint(game.num_players(), 0);
  double total = 0.0;
  for (std::int64_t f = 0; f < game.num_joint_actions(); ++f) {
    double w = 1.0;
    for (int j = 0; j < game.num_players() && w != 0.0; ++j) w *= profile[j][joint[j]];
    total += w * tensor[f];
    Advance(joint, game.action_counts());
  }
  return total;
}

namespace {

template <typename Mixed>
std::vector<double> UtilityVectorImpl(const FiniteGame& game, const Mixed& mixed,
                                      int player) {
  if (player < 0 || player >= game.num_players()) {
    throw InvalidInputError("player index out of range");
  }
  const auto& tensor = game.payoff_tensor(player);
  std::vector<double> out(game.num_actions(player), 0.0);
  std::vector<int> joint(game.num_players(), 0);
  for (std::int64_t f = 0; f < game.num_joint_actions(); ++f) {
    double w = 1.0;
    for (int j = 0; j < game.num_players() && w != 0.0; ++j) {
      if (j != player) w *= mixed[j][joint[j]];
    }
    out[joint[player]] += w * tensor[f];
    Advance(joint, game.action_counts());
  }
  return out;
}

}  // namespace

std::vector<double> UtilityVector(const FiniteGame& game, const Profile& profile,
                                  int player) {
  ValidateProfile(game, profile);
  return UtilityVectorImpl(game, profile, player);
}

std::vector<double> UtilityVector(const FiniteGame& game,
                                  const std::vector<std::vector<double>>& mixed,
                                  int player) {
  if (static_cast<int>(mixed.size()) != game.num_players()) {
    throw InvalidInputError("mixed profile has wrong player count");
  }
  for (int j = 0; j < game.num_players(); ++j) {
    if (static_cast<int>(mixed[j].size()) != game.num_actions(j)) {
      throw InvalidInputError("mixed strategy has wrong dimension");
    }
  }
  return UtilityVectorImpl(game, mixed, player);
}

std::vector<std::vector<double>> JointUtilityVector(const FiniteGame& game,
                                                    const Profile& profile) {
  std::vector<std::vector<double>> out;
  out.reserve(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) out.push_back(UtilityVector(game, profile, i));
  return out;
}

std::vector<double> UtilityVectorAgainst(const FiniteGame& game,
                                         const std::vector<int>& joint, int player) {
  std::vector<int> probe = joint;
  probe[player] = 0;
  const std::int64_t base = game.FlatIndex(probe);
  const auto& tensor = game.payoff_tensor(player);
  std::vector<double> out(game.num_actions(player));
  for (int a = 0; a < game.num_actions(player); ++a) {
    out[a] = tensor[base + a * game.stride(player)];
  }
  return out;
}

FiniteGame BimatrixGame(const std::vector<std::vector<double>>& row_payoffs,
                        const std::vector<std::vector<double>>& col_payoffs) {
  const int rows = static_cast<int>(row_payoffs.size());
  if (rows == 0 || col_payoffs.size() != row_payoffs.size()) {
    throw InvalidInputError("bimatrix payoffs must have matching nonzero row count");
  }
  const int cols = static_cast<int>(row_payoffs[0].size());
  std::vector<std::vector<double>> t(2);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(row_payoffs[r].size()) != cols ||
        static_cast<int>(col_payoffs[r].size()) != cols) {
      throw InvalidInputError("bimatrix rows must have equal length");
    }
    for (int c = 0; c < cols; ++c) {
      t[0].push_back(row_payoffs[r][c]);
      t[1].push_back(col_payoffs[r][c]);
    }
  }
  return FiniteGame({rows, cols}, std::move(t));
}

FiniteGame ZeroSumGame(const std::vector<std::vector<double>>& row_payoffs) {
  auto neg = row_payoffs;
  for (auto& row : neg) {
    for (double& v : row) v = -v;
  }
  return BimatrixGame(row_payoffs, neg);
}

FiniteGame MatchingPennies() { return ZeroSumGame({{1, -1}, {-1, 1}}); }

FiniteGame PrisonersDilemma(double reward, double sucker, double temptation,
                            double punishment) {
  // Action 0 = cooperate, 1 = defect.
  return BimatrixGame({{reward, sucker}, {temptation, punishment}},
                      {{reward, temptation}, {sucker, punishment}});
}

FiniteGame CoordinationGame(int actions) {
  std::vector<std::vector<double>> m(actions, std::vector<double>(actions, 0.0));
  for (int a = 0; a < actions; ++a) m[a][a] = 1.0;
  return BimatrixGame(m, m);
}

FiniteGame RockPaperScissors() {
  return ZeroSumGame({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
}

FiniteGame RandomGame(const std::vector<int>& action_counts, Rng& rng, double lo,
                      double hi) {
  std::int64_t joint = 1;
  for (int m : action_counts) {
    if (m <= 0) throw InvalidInputError("action counts must be positive");
    joint *= m;
    if (joint > kMaxJointActions) throw ResourceError("random game too large");
  }
  std::vector<std::vector<double>> t(action_counts.size(),
                                     std::vector<double>(joint));
  for (auto& tensor : t) {
    for (double& v : tensor) v = lo + (hi - lo) * rng.Uniform();
  }
  return FiniteGame(action_counts, std::move(t));
}

FiniteGame RandomPotentialGame(const std::vector<int>& action_counts, Rng& rng,
                               int range) {
  if (range < 1) throw InvalidInputError("potential range must be at least 1");
  std::int64_t joint = 1;
  for (int m : action_counts) {
    if (m <= 0) throw InvalidInputError("action counts must be positive");
    joint *= m;
    if (joint > kMaxJointActions) throw ResourceError("random game too large");
  }
  const int span = 2 * range + 1;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> phi(joint);
    for (double& v : phi) {
      v = static_cast<double>(static_cast<int>(rng() % span) - range);
    }
    FiniteGame g(action_counts,
                 std::vector<std::vector<double>>(action_counts.size(), phi));
    bool generic = true;
    for (std::int64_t f = 0; f < joint && generic; ++f) {
      const auto a = g.JointAction(f);
      for (int i = 0; i < g.num_players() && generic; ++i) {
        if (a[i] != 0) continue;
        const auto u = UtilityVectorAgainst(g, a, i);
        for (std::size_t x = 0; x < u.size() && generic; ++x) {
          for (std::size_t y = x + 1; y < u.size(); ++y) {
            if (u[x] == u[y]) {
              generic = false;
              break;
            }
          }
        }
      }
    }
    if (generic) return g;
  }
  throw InvalidInputError("could not draw a generic potential game");
}

}  // namespace nashflow
