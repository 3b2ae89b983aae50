#include "nashflow/continuous_game.h"

#include <cmath>
#include <string>

#include "nashflow/errors.h"

namespace nashflow {

int Dimension(const ActionSet& set) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          return static_cast<int>(s.lower.size());
        } else if constexpr (std::is_same_v<T, SimplexSet>) {
          return s.dim;
        } else {
          return static_cast<int>(s.normal.size());
        }
      },
      set);
}

void ValidateActionSet(const ActionSet& set) {
  if (const auto* box = std::get_if<BoxSet>(&set)) {
    if (box->lower.size() != box->upper.size() || box->lower.empty()) {
      throw InvalidInputError("box bounds must be nonempty and of equal length");
    }
    for (std::size_t k = 0; k < box->lower.size(); ++k) {
      if (!std::isfinite(box->lower[k]) || !std::isfinite(box->upper[k]) ||
          box->lower[k] > box->upper[k]) {
        throw InvalidInputError("box requires finite lower <= upper");
      }
    }
  } else if (const auto* sx = std::get_if<SimplexSet>(&set)) {
    if (sx->dim <= 0) throw InvalidInputError("simplex set dimension must be positive");
  } else {
    const auto& h = std::get<HyperplaneSet>(set);
    double nn = 0.0;
    for (double v : h.normal) nn += v * v;
    if (h.normal.empty() || nn == 0.0) {
      throw InvalidInputError("hyperplane normal must be nonzero");
    }
  }
}

bool IsFeasible(const ActionSet& set, const std::vector<double>& x, double tol) {
  if (static_cast<int>(x.size()) != Dimension(set)) return false;
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  if (const auto* box = std::get_if<BoxSet>(&set)) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] < box->lower[k] - tol || x[k] > box->upper[k] + tol) return false;
    }
    return true;
  }
  if (std::holds_alternative<SimplexSet>(set)) {
    double sum = 0.0;
    for (double v : x) {
      if (v < -tol) return false;
      sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
  }
  const auto& h = std::get<HyperplaneSet>(set);
  double dot = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) dot += h.normal[k] * x[k];
  return std::abs(dot - h.offset) <= tol * (1.0 + std::abs(h.offset));
}

ContinuousGame::ContinuousGame(std::vector<ActionSet> sets, UtilityFn utility,
                               GradientFn gradient)
    : sets_(std::move(sets)), utility_(std::move(utility)), gradient_(std::move(gradient)) {
  if (sets_.empty()) throw InvalidInputError("game needs at least one player");
  for (const auto& s : sets_) ValidateActionSet(s);
  if (!utility_ || !gradient_) throw InvalidInputError("utility and gradient are required");
}

bool ContinuousGame::IsFeasible(const JointPoint& a, double tol) const {
  if (a.size() != sets_.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!nashflow::IsFeasible(sets_[i], a[i], tol)) return false;
  }
  return true;
}

double ContinuousGame::Utility(const JointPoint& a, int player) const {
  if (!IsFeasible(a)) throw DomainError("joint action is infeasible");
  return utility_(a, player);
}

JointPoint PayoffGradient(const ContinuousGame& game, const JointPoint& a) {
  if (!game.IsFeasible(a)) throw DomainError("joint action is infeasible");
  JointPoint d = game.gradient_(a);
  if (d.size() != a.size()) throw InvalidInputError("gradient has wrong player count");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].size() != a[i].size()) {
      throw InvalidInputError("gradient of player " + std::to_string(i) +
                              " has wrong dimension");
    }
  }
  return d;
}

ContinuousGame MixedExtension(const FiniteGame& game) {
  std::vector<ActionSet> sets;
  for (int i = 0; i < game.num_players(); ++i) sets.push_back(SimplexSet{game.num_actions(i)});
  auto utility = [game](const JointPoint& a, int player) {
    return ExpectedUtility(game, ToProfile(a), player);
  };
  auto gradient = [game](const JointPoint& a) {
    return JointUtilityVector(game, ToProfile(a));
  };
  return ContinuousGame(std::move(sets), utility, gradient);
}

ContinuousGame QuadraticGame(const QuadraticGameSpec& spec) {
  const std::size_t n = spec.sets.size();
  if (spec.linear.size() != n || spec.curvature.size() != n ||
      (!spec.coupling.empty() && spec.coupling.size() != n)) {
    throw InvalidInputError("quadratic game spec has inconsistent player counts");
  }
  std::vector<int> dims(n);
  for (std::size_t i = 0; i < n; ++i) {
    dims[i] = Dimension(spec.sets[i]);
    if (static_cast<int>(spec.linear[i].size()) != dims[i]) {
      throw InvalidInputError("linear term has wrong dimension");
    }
  }
  auto gradient = [spec, dims](const JointPoint& a) {
    JointPoint d(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      d[i] = spec.linear[i];
      for (int k = 0; k < dims[i]; ++k) d[i][k] -= spec.curvature[i] * a[i][k];
      if (spec.coupling.empty()) continue;
      for (std::size_t j = 0; j < dims.size(); ++j) {
        if (j == i || spec.coupling[i][j].empty()) continue;
        const auto& c = spec.coupling[i][j];
        for (int k = 0; k < dims[i]; ++k) {
          for (int l = 0; l < dims[j]; ++l) d[i][k] += c[k * dims[j] + l] * a[j][l];
        }
      }
    }
    return d;
  };
  auto utility = [spec, dims](const JointPoint& a, int player) {
    const std::size_t i = static_cast<std::size_t>(player);
    double u = 0.0;
    for (int k = 0; k < dims[i]; ++k) {
      u += spec.linear[i][k] * a[i][k] - 0.5 * spec.curvature[i] * a[i][k] * a[i][k];
    }
    if (!spec.coupling.empty()) {
      for (std::size_t j = 0; j < dims.size(); ++j) {
        if (j == i || spec.coupling[i][j].empty()) continue;
        const auto& c = spec.coupling[i][j];
        for (int k = 0; k < dims[i]; ++k) {
          for (int l = 0; l < dims[j]; ++l) u += a[i][k] * c[k * dims[j] + l] * a[j][l];
        }
      }
    }
    return u;
  };
  for (std::size_t i = 0; i < n && !spec.coupling.empty(); ++i) {
    if (spec.coupling[i].size() != n) throw InvalidInputError("coupling must be N x N");
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && !spec.coupling[i][j].empty() &&
          static_cast<int>(spec.coupling[i][j].size()) != dims[i] * dims[j]) {
        throw InvalidInputError("coupling block has wrong size");
      }
    }
  }
  return ContinuousGame(spec.sets, utility, gradient);
}

}  // namespace nashflow
