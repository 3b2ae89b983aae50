#pragma once

#include <optional>
#include <vector>

#include "nashflow/continuous_game.h"
#include "nashflow/finite_game.h"
#include "nashflow/random.h"

namespace nashflow {

// Tolerance for exact-arithmetic equilibrium checks.
inline constexpr double kNashTolerance = 1e-9;
// Tolerance for profiles produced by learning trajectories.
inline constexpr double kTrajectoryNashTolerance = 1e-6;

struct PureEquilibrium {
  std::vector<int> actions;
  bool strict = false;
};

// A profitable deviation. For finite games `action` is the pure action
// reached; for sampled checks `point` holds the offending profile; for
// continuous games `point` holds the improving action vector of `player`.
struct Deviation {
  int player = -1;
  int action = -1;
  std::vector<std::vector<double>> point;
};

struct NeVerdict {
  double residual = 0.0;
  std::optional<Deviation> witness;
  bool is_epsilon_ne = true;
  // Sampled checks only.
  long long samples = 0;
  double worst_value = 0.0;
};

// All pure profiles from which no player gains by a pure deviation.
// Throws ResourceError above kMaxJointActions profiles.
std::vector<PureEquilibrium> EnumeratePureNash(const FiniteGame& game);

// sum_i [max_a u_i(a, pi_{-i}) - u_i(pi)]. Equal to the Stampacchia gap and to
// exploitability.
NeVerdict SviResidual(const FiniteGame& game, const Profile& profile,
                      double tol = kNashTolerance);

// <u(pi), pi - candidate> summed over players.
double MintyTerm(const FiniteGame& game, const Profile& pi, const Profile& candidate);

// Uniform samples over the product of simplices; reports the largest Minty term.
NeVerdict MviCheck(const FiniteGame& game, const Profile& candidate, long long n_samples,
                   Rng& rng, double tol = kNashTolerance);

// Samples profiles within L1 distance `radius` (per player) of the candidate
// and checks that the Minty term is nonpositive there. Sampling evidence only.
NeVerdict VsProbe(const FiniteGame& game, const Profile& candidate, double radius,
                  long long n_samples, Rng& rng, double tol = kNashTolerance);

// sum_i max_{a_i feasible} <D_i(a*), a_i - a_i*>, solved in closed form per
// player. Unbounded directions on hyperplane sets yield +infinity unless the
// gradient is normal to the set.
NeVerdict ContinuousNeResidual(const ContinuousGame& game, const JointPoint& a_star,
                               double tol = kNashTolerance);

// Point drawn uniformly from the simplex of dimension n.
std::vector<double> SampleSimplex(int n, Rng& rng);

}  // namespace nashflow
