#include "nashflow/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashflow/errors.h"

namespace nashflow {

std::vector<double> SampleSimplex(int n, Rng& rng) {
  // Normalized unit exponentials are Dirichlet(1, ..., 1).
  std::vector<double> x(n);
  double sum = 0.0;
  for (double& v : x) {
    v = -std::log1p(-rng.Uniform());
    sum += v;
  }
  if (sum == 0.0) return Simplex::Uniform(n).values();
  for (double& v : x) v /= sum;
  return x;
}

std::vector<PureEquilibrium> EnumeratePureNash(const FiniteGame& game) {
  if (game.num_joint_actions() > kMaxJointActions) {
    throw ResourceError("too many joint actions to enumerate");
  }
  std::vector<PureEquilibrium> out;
  for (std::int64_t f = 0; f < game.num_joint_actions(); ++f) {
    const auto joint = game.JointAction(f);
    bool is_ne = true;
    bool strict = true;
    for (int i = 0; i < game.num_players() && is_ne; ++i) {
      const double own = game.payoff(i, f);
      for (int a = 0; a < game.num_actions(i); ++a) {
        if (a == joint[i]) continue;
        const double alt = game.payoff(i, f + (a - joint[i]) * game.stride(i));
        if (alt > own) {
          is_ne = false;
          break;
        }
        if (alt == own) strict = false;
      }
    }
    if (is_ne) out.push_back({joint, strict});
  }
  return out;
}

NeVerdict SviResidual(const FiniteGame& game, const Profile& profile, double tol) {
  ValidateProfile(game, profile);
  NeVerdict v;
  double best_gain = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto u = UtilityVector(game, profile, i);
    double avg = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) avg += profile[i][a] * u[a];
    const auto top = std::max_element(u.begin(), u.end());
    const double gain = std::max(*top - avg, 0.0);
    v.residual += gain;
    if (gain > best_gain) {
      best_gain = gain;
      v.witness = Deviation{i, static_cast<int>(top - u.begin()), {}};
    }
  }
  v.is_epsilon_ne = v.residual <= tol;
  return v;
}

double MintyTerm(const FiniteGame& game, const Profile& pi, const Profile& candidate) {
  ValidateProfile(game, candidate);
  double total = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto u = UtilityVector(game, pi, i);
    for (std::size_t a = 0; a < u.size(); ++a) total += u[a] * (pi[i][a] - candidate[i][a]);
  }
  return total;
}

NeVerdict MviCheck(const FiniteGame& game, const Profile& candidate, long long n_samples,
                   Rng& rng, double tol) {
  if (n_samples < 1) throw InvalidInputError("need at least one sample");
  ValidateProfile(game, candidate);
  NeVerdict v;
  v.worst_value = -std::numeric_limits<double>::infinity();
  for (long long s = 0; s < n_samples; ++s) {
    Profile pi;
    for (int i = 0; i < game.num_players(); ++i) {
      pi.emplace_back(SampleSimplex(game.num_actions(i), rng));
    }
    const double term = MintyTerm(game, pi, candidate);
    if (term > v.worst_value) {
      v.worst_value = term;
      if (term > tol) v.witness = Deviation{-1, -1, ToVectors(pi)};
    }
  }
  v.samples = n_samples;
  v.residual = std::max(v.worst_value, 0.0);
  v.is_epsilon_ne = v.worst_value <= tol;
  if (v.residual == 0.0) v.witness.reset();
  return v;
}

NeVerdict VsProbe(const FiniteGame& game, const Profile& candidate, double radius,
                  long long n_samples, Rng& rng, double tol) {
  if (!(radius >= 0.0)) throw InvalidInputError("radius must be nonnegative");
  if (n_samples < 0) throw InvalidInputError("sample count must be nonnegative");
  ValidateProfile(game, candidate);
  NeVerdict v;
  if (radius == 0.0) return v;
  v.worst_value = -std::numeric_limits<double>::infinity();
  for (long long s = 0; s < n_samples; ++s) {
    // Move from the candidate toward a uniform point, stopping at a random
    // L1 radius inside the ball; convexity keeps the result feasible.
    std::vector<std::vector<double>> target;
    double dist = 0.0;
    for (int i = 0; i < game.num_players(); ++i) {
      target.push_back(SampleSimplex(game.num_actions(i), rng));
      dist += L1Distance(target.back(), candidate[i].probs());
    }
    if (dist == 0.0) continue;
    const double step = std::min(1.0, radius * rng.Uniform() / dist);
    if (step == 0.0) continue;
    Profile pi;
    for (int i = 0; i < game.num_players(); ++i) {
      std::vector<double> p(game.num_actions(i));
      for (std::size_t a = 0; a < p.size(); ++a) {
        p[a] = candidate[i][a] + step * (target[i][a] - candidate[i][a]);
      }
      pi.emplace_back(std::move(p));
    }
    ++v.samples;
    const double term = MintyTerm(game, pi, candidate);
    if (term > v.worst_value) {
      v.worst_value = term;
      if (term > tol) v.witness = Deviation{-1, -1, ToVectors(pi)};
    }
  }
  if (v.samples == 0) {
    v.worst_value = 0.0;
    return v;
  }
  v.residual = std::max(v.worst_value, 0.0);
  v.is_epsilon_ne = v.worst_value <= tol;
  if (v.residual == 0.0) v.witness.reset();
  return v;
}

NeVerdict ContinuousNeResidual(const ContinuousGame& game, const JointPoint& a_star,
                               double tol) {
  const JointPoint d = PayoffGradient(game, a_star);
  NeVerdict v;
  double best_gain = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto& g = d[i];
    const auto& x = a_star[i];
    std::vector<double> target(x);
    double gain = 0.0;
    const ActionSet& set = game.action_set(i);
    if (const auto* box = std::get_if<BoxSet>(&set)) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        target[k] = g[k] > 0.0 ? box->upper[k] : (g[k] < 0.0 ? box->lower[k] : x[k]);
        gain += g[k] * (target[k] - x[k]);
      }
    } else if (std::holds_alternative<SimplexSet>(set)) {
      const auto top = std::max_element(g.begin(), g.end());
      double avg = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) avg += g[k] * x[k];
      gain = *top - avg;
      std::fill(target.begin(), target.end(), 0.0);
      target[top - g.begin()] = 1.0;
    } else {
      // Tangential gradient component makes the linear objective unbounded.
      const auto& h = std::get<HyperplaneSet>(set);
      double gn = 0.0;
      double nn = 0.0;
      double gg = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        gn += g[k] * h.normal[k];
        nn += h.normal[k] * h.normal[k];
        gg += g[k] * g[k];
      }
      const double tangential = gg - gn * gn / nn;
      if (tangential > tol * tol * std::max(1.0, gg)) {
        gain = std::numeric_limits<double>::infinity();
      }
    }
    gain = std::max(gain, 0.0);
    v.residual += gain;
    if (gain > best_gain) {
      best_gain = gain;
      v.witness = Deviation{i, -1, {target}};
    }
  }
  v.is_epsilon_ne = v.residual <= tol;
  return v;
}

}  // namespace nashflow
