#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nashflow/finite_game.h"
#include "nashflow/response.h"

namespace nashflow {

// Simplex components must stay within this drift of a valid simplex during
// integration; smaller drift is corrected each step.
inline constexpr double kFlowSimplexTolerance = 1e-7;

// Strategy-space speed below which a flow state counts as stationary.
inline constexpr double kStationaryThreshold = 1e-8;

// dpi_a/dt = pi_a (u_a - <pi, u>) per player.
std::vector<std::vector<double>> ReplicatorRhs(const FiniteGame& game, const Profile& pi);

// d u_hat/dt = u(pi) - u_hat; d pi/dt = QR(u_hat) - pi.
struct SbrDerivative {
  std::vector<std::vector<double>> score;
  std::vector<std::vector<double>> strategy;
};
SbrDerivative SbrRhs(const FiniteGame& game, const std::vector<std::vector<double>>& u_hat,
                     const Profile& pi, const Regularizer& reg);

// Single-timescale form d pi/dt = QR(u(pi)) - pi.
std::vector<std::vector<double>> SbrSingleTimescaleRhs(const FiniteGame& game,
                                                       const Profile& pi,
                                                       const Regularizer& reg);

// d pi/dt = BR(pi) - pi with the given selection from the best-response set.
std::vector<std::vector<double>> BrRhs(const FiniteGame& game, const Profile& pi,
                                       TieRule selection = TieRule::kLowestIndex);

// d u_hat/dt = u(QR(u_hat)).
std::vector<std::vector<double>> DaFlowRhs(const FiniteGame& game,
                                           const std::vector<std::vector<double>>& u_hat,
                                           const Regularizer& reg);

// Strategy-space velocity of the dual-averaging flow by the chain rule.
std::vector<std::vector<double>> DaStrategyVelocity(const FiniteGame& game,
                                                    const std::vector<std::vector<double>>& u_hat,
                                                    const Regularizer& reg);

// Autonomous ODE over a flat state vector whose strategy part can be read off.
class FlowSystem {
 public:
  virtual ~FlowSystem() = default;

  virtual std::string name() const = 0;
  virtual int dimension() const = 0;
  virtual std::vector<double> Derivative(const std::vector<double>& y) const = 0;
  // (offset, length) of every block of y that must stay on a simplex.
  virtual std::vector<std::pair<int, int>> simplex_blocks() const = 0;
  // Strategy profile encoded by state y.
  virtual Profile Strategy(const std::vector<double>& y) const = 0;
  // A state whose strategy is pi.
  virtual std::vector<double> Lift(const Profile& pi) const = 0;
  // d pi/dt at state y, concatenated over players.
  virtual std::vector<double> StrategyVelocity(const std::vector<double>& y) const = 0;
  // Selection rule or other metadata worth recording with a trajectory.
  virtual std::string metadata() const { return ""; }
};

class ReplicatorFlow : public FlowSystem {
 public:
  explicit ReplicatorFlow(FiniteGame game);
  std::string name() const override { return "replicator"; }
  int dimension() const override;
  std::vector<double> Derivative(const std::vector<double>& y) const override;
  std::vector<std::pair<int, int>> simplex_blocks() const override;
  Profile Strategy(const std::vector<double>& y) const override;
  std::vector<double> Lift(const Profile& pi) const override;
  std::vector<double> StrategyVelocity(const std::vector<double>& y) const override;

 private:
  FiniteGame game_;
};

// State is the joint score vector; the strategy is QR(score).
class DualAveragingFlow : public FlowSystem {
 public:
  DualAveragingFlow(FiniteGame game, Regularizer reg);
  std::string name() const override { return "da_flow"; }
  int dimension() const override;
  std::vector<double> Derivative(const std::vector<double>& y) const override;
  std::vector<std::pair<int, int>> simplex_blocks() const override { return {}; }
  Profile Strategy(const std::vector<double>& y) const override;
  // Entropy: eps * log(pi), which needs an interior pi. Euclidean: eps * pi.
  std::vector<double> Lift(const Profile& pi) const override;
  std::vector<double> StrategyVelocity(const std::vector<double>& y) const override;

 private:
  FiniteGame game_;
  Regularizer reg_;
};

// Two-timescale state (score, strategy), or strategy only in single-timescale form.
class SmoothedBestResponseFlow : public FlowSystem {
 public:
  SmoothedBestResponseFlow(FiniteGame game, Regularizer reg, bool two_timescale = true);
  std::string name() const override { return "sbr_flow"; }
  int dimension() const override;
  std::vector<double> Derivative(const std::vector<double>& y) const override;
  std::vector<std::pair<int, int>> simplex_blocks() const override;
  Profile Strategy(const std::vector<double>& y) const override;
  // Score is set to u(pi), the fast variable's rest point.
  std::vector<double> Lift(const Profile& pi) const override;
  std::vector<double> StrategyVelocity(const std::vector<double>& y) const override;

 private:
  int strategy_offset() const;
  FiniteGame game_;
  Regularizer reg_;
  bool two_timescale_;
};

// One solution branch of d pi/dt in BR(pi) - pi.
class BestResponseFlow : public FlowSystem {
 public:
  explicit BestResponseFlow(FiniteGame game, TieRule selection = TieRule::kLowestIndex);
  std::string name() const override { return "br_flow"; }
  int dimension() const override;
  std::vector<double> Derivative(const std::vector<double>& y) const override;
  std::vector<std::pair<int, int>> simplex_blocks() const override;
  Profile Strategy(const std::vector<double>& y) const override;
  std::vector<double> Lift(const Profile& pi) const override;
  std::vector<double> StrategyVelocity(const std::vector<double>& y) const override;
  std::string metadata() const override;

 private:
  FiniteGame game_;
  TieRule selection_;
};

// Builds a flow by name: replicator, da_flow, sbr_flow, sbr_flow_single, br_flow.
std::unique_ptr<FlowSystem> MakeFlow(const std::string& name, const FiniteGame& game,
                                     const Regularizer& reg);

enum class IntegrationMethod { kRk4, kEuler };

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::string metadata;
  // Largest simplex-sum deviation seen before per-step correction.
  double max_simplex_drift = 0.0;
};

// Fixed-step integration from y0 over [0, t_end]. The last step is shortened
// to land on t_end. Samples every `sample_stride` steps plus the endpoint.
// Throws IntegrationError on non-finite state or simplex drift above
// kFlowSimplexTolerance.
FlowTrajectory Integrate(const FlowSystem& system, const std::vector<double>& y0,
                         double t_end, double dt = 1e-3,
                         IntegrationMethod method = IntegrationMethod::kRk4,
                         std::int64_t sample_stride = 1);

// Concatenation of a profile into one vector and back.
std::vector<double> Flatten(const Profile& pi);
std::vector<double> Flatten(const std::vector<std::vector<double>>& blocks);
std::vector<std::vector<double>> Split(const std::vector<double>& flat,
                                       const std::vector<int>& sizes, int offset = 0);

}  // namespace nashflow
