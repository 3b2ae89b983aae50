#include "nashflow/netapps/grid.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "nashflow/equilibrium.h"
#include "nashflow/errors.h"
#include "nashflow/random.h"

namespace nashflow::netapps {

void ValidateGridInstance(const GridInstance& inst) {
  const int n = inst.num_buses();
  if (n < 1) throw InvalidInputError("grid needs at least one bus");
  if (static_cast<int>(inst.s.size()) != n || static_cast<int>(inst.cap.size()) != n ||
      static_cast<int>(inst.unit_cost.size()) != n || static_cast<int>(inst.weight.size()) != n) {
    throw InvalidInputError("grid vectors must have one entry per bus");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(inst.s[i].size()) != n) throw InvalidInputError("s must be square");
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(inst.s[i][j])) throw InvalidInputError("s must be finite");
    }
    if (!(inst.cap[i] >= 0.0) || !std::isfinite(inst.cap[i])) {
      throw InvalidInputError("injection caps must be finite and nonnegative");
    }
    if (!std::isfinite(inst.load[i]) || !std::isfinite(inst.unit_cost[i]) ||
        !std::isfinite(inst.weight[i])) {
      throw InvalidInputError("grid parameters must be finite");
    }
  }
  if (!std::isfinite(inst.price)) throw InvalidInputError("price must be finite");
  std::vector<std::string> violations;
  for (int i = 0; i < n; ++i) {
    if (inst.weight[i] == 0.0) {
      violations.push_back("/weight/" + std::to_string(i) +
                           ": r_i = 0 leaves the utility linear in own injection");
    }
    if (!(inst.s[i][i] > 0.0)) {
      violations.push_back("/s/" + std::to_string(i) + "/" + std::to_string(i) +
                           ": s_ii must be positive for a concave utility");
    }
  }
  if (!violations.empty()) throw ConfigError(violations);
}

GridInstance SyntheticGrid(int buses, GridTopology topology, std::uint64_t seed,
                           double ground) {
  if (buses < 1) throw InvalidInputError("grid needs at least one bus");
  if (!(ground > 0.0)) throw InvalidInputError("ground susceptance must be positive");
  Rng rng = Rng::Stream(seed, {static_cast<std::uint64_t>(StreamPurpose::kInstance), 0x67726964});
  Eigen::MatrixXd b = ground * Eigen::MatrixXd::Identity(buses, buses);
  auto line = [&](int i, int j) {
    const double y = 0.5 + rng.Uniform();
    b(i, i) += y;
    b(j, j) += y;
    b(i, j) -= y;
    b(j, i) -= y;
  };
  for (int i = 0; i + 1 < buses; ++i) line(i, i + 1);
  if (topology == GridTopology::kRing && buses > 2) line(buses - 1, 0);
  const Eigen::MatrixXd s = b.inverse();

  GridInstance inst;
  inst.s.assign(buses, std::vector<double>(buses));
  for (int i = 0; i < buses; ++i) {
    for (int j = 0; j < buses; ++j) inst.s[i][j] = 0.5 * (s(i, j) + s(j, i));
  }
  inst.price = 1.0;
  for (int i = 0; i < buses; ++i) {
    inst.load.push_back(0.5 + rng.Uniform());
    inst.cap.push_back(2.0 + 2.0 * rng.Uniform());
    inst.unit_cost.push_back(0.8 + 0.2 * rng.Uniform());
    inst.weight.push_back(2.0 + rng.Uniform());
  }
  return inst;
}

std::vector<double> PhaseAngles(const GridInstance& inst, const std::vector<double>& injection) {
  const int n = inst.num_buses();
  std::vector<double> theta(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) theta[i] += inst.s[i][j] * (injection[j] - inst.load[j]);
  }
  return theta;
}

double GridUtility(const GridInstance& inst, const std::vector<double>& injection, int bus) {
  const double theta = PhaseAngles(inst, injection)[bus];
  const double r = inst.weight[bus];
  return -inst.unit_cost[bus] * injection[bus] -
         inst.price * (inst.load[bus] - injection[bus]) - 0.5 * r * r * theta * theta;
}

double GridGradient(const GridInstance& inst, const std::vector<double>& injection, int bus) {
  const double theta = PhaseAngles(inst, injection)[bus];
  const double r = inst.weight[bus];
  return -inst.unit_cost[bus] + inst.price - r * r * theta * inst.s[bus][bus];
}

ContinuousGame BuildGridGame(const GridInstance& inst) {
  ValidateGridInstance(inst);
  std::vector<ActionSet> sets;
  for (int i = 0; i < inst.num_buses(); ++i) sets.push_back(BoxSet{{0.0}, {inst.cap[i]}});
  auto flat = [](const JointPoint& a) {
    std::vector<double> p;
    for (const auto& x : a) p.push_back(x[0]);
    return p;
  };
  auto utility = [inst, flat](const JointPoint& a, int player) {
    return GridUtility(inst, flat(a), player);
  };
  auto gradient = [inst, flat](const JointPoint& a) {
    const auto p = flat(a);
    JointPoint d;
    for (int i = 0; i < inst.num_buses(); ++i) d.push_back({GridGradient(inst, p, i)});
    return d;
  };
  return ContinuousGame(std::move(sets), utility, gradient);
}

GridSimulator::GridSimulator(const GridInstance& inst, std::vector<double> injection)
    : inst_(inst), injection_(std::move(injection)) {
  if (static_cast<int>(injection_.size()) != inst_.num_buses()) {
    throw InvalidInputError("injection vector has wrong length");
  }
}

double GridSimulator::MeasureTheta(int bus) const {
  double theta = 0.0;
  for (int j = 0; j < inst_.num_buses(); ++j) {
    theta += inst_.s[bus][j] * (injection_[j] - inst_.load[j]);
  }
  return theta;
}

double GridSimulator::ReadInjection(int bus, int reader) const {
  if (bus != reader) ++foreign_reads_;
  return injection_.at(bus);
}

void GridSimulator::SetInjection(int bus, double value) { injection_.at(bus) = value; }

double GridBestResponse(const GridInstance& inst, int bus, double rest) {
  const double sii = inst.s[bus][bus];
  const double r = inst.weight[bus];
  const double target = (inst.price - inst.unit_cost[bus]) / (r * r * sii);
  const double p = inst.load[bus] + (target - rest) / sii;
  return std::clamp(p, 0.0, inst.cap[bus]);
}

double GridBestResponseFromTheta(const GridInstance& inst, int bus, double theta,
                                 double own_injection) {
  const double rest = theta - inst.s[bus][bus] * (own_injection - inst.load[bus]);
  return GridBestResponse(inst, bus, rest);
}

std::string GridAlgorithmName(GridAlgorithm a) {
  switch (a) {
    case GridAlgorithm::kPua:
      return "pua";
    case GridAlgorithm::kRua:
      return "rua";
    case GridAlgorithm::kPda:
      return "pda";
  }
  return "pua";
}

GridRun RunGrid(const GridInstance& inst, GridAlgorithm algo, int iters, std::uint64_t seed,
                double hold_prob, double tol, std::vector<double> start) {
  ValidateGridInstance(inst);
  if (iters < 0) throw InvalidInputError("iteration count must be nonnegative");
  if (!(hold_prob >= 0.0 && hold_prob < 1.0)) {
    throw InvalidInputError("hold probability must lie in [0, 1)");
  }
  const int n = inst.num_buses();
  if (start.empty()) start.assign(n, 0.0);
  if (static_cast<int>(start.size()) != n) throw InvalidInputError("start has wrong length");
  for (int i = 0; i < n; ++i) start[i] = std::clamp(start[i], 0.0, inst.cap[i]);

  GridSimulator sim(inst, start);
  GridRun run;
  run.iterates.push_back(start);
  for (int t = 1; t <= iters; ++t) {
    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) {
      const double own = sim.ReadInjection(i, i);
      if (algo == GridAlgorithm::kRua) {
        Rng r = PlayerStream(seed, StreamPurpose::kRandomUpdate, i, t);
        if (r.Uniform() < hold_prob) {
          next[i] = own;
          continue;
        }
      }
      if (algo == GridAlgorithm::kPda) {
        next[i] = GridBestResponseFromTheta(inst, i, sim.MeasureTheta(i), own);
      } else {
        double rest = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j != i) rest += inst.s[i][j] * (sim.ReadInjection(j, i) - inst.load[j]);
        }
        next[i] = GridBestResponse(inst, i, rest);
      }
    }
    for (int i = 0; i < n; ++i) sim.SetInjection(i, next[i]);
    run.iterates.push_back(next);
    run.iterations = t;
    // Convergence monitor, outside the buses' information model.
    const auto theta = PhaseAngles(inst, next);
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
      gap = std::max(gap, std::abs(GridBestResponseFromTheta(inst, i, theta[i], next[i]) - next[i]));
    }
    if (!std::isfinite(gap)) throw IntegrationError("grid iteration diverged", t);
    if (gap <= tol) {
      run.converged = true;
      break;
    }
  }
  JointPoint a;
  for (double p : run.iterates.back()) a.push_back({p});
  run.ne_residual = ContinuousNeResidual(BuildGridGame(inst), a).residual;
  run.foreign_reads = sim.foreign_reads();
  return run;
}

}  // namespace nashflow::netapps
