#include "nashflow/flows.h"

#include <cmath>
#include <string>

#include "nashflow/errors.h"

namespace nashflow {
namespace {

std::vector<int> Sizes(const FiniteGame& game) { return game.action_counts(); }

int Total(const FiniteGame& game) {
  int t = 0;
  for (int m : game.action_counts()) t += m;
  return t;
}

std::vector<std::pair<int, int>> Blocks(const FiniteGame& game, int offset) {
  std::vector<std::pair<int, int>> out;
  for (int m : game.action_counts()) {
    out.emplace_back(offset, m);
    offset += m;
  }
  return out;
}

std::vector<std::vector<double>> JointUtility(const FiniteGame& game,
                                              const std::vector<std::vector<double>>& pi) {
  std::vector<std::vector<double>> u;
  for (int i = 0; i < game.num_players(); ++i) u.push_back(UtilityVector(game, pi, i));
  return u;
}

std::vector<std::vector<double>> Raw(const Profile& pi) { return ToVectors(pi); }

// Velocity of pi = MirrorMap(score) along d score/dt = u.
std::vector<double> MirrorVelocity(const std::vector<double>& pi, const std::vector<double>& u,
                                   const Regularizer& reg) {
  std::vector<double> v(pi.size(), 0.0);
  if (reg.kind == RegularizerKind::kEntropy) {
    double avg = 0.0;
    for (std::size_t a = 0; a < pi.size(); ++a) avg += pi[a] * u[a];
    for (std::size_t a = 0; a < pi.size(); ++a) v[a] = pi[a] * (u[a] - avg) / reg.epsilon;
    return v;
  }
  // Euclidean: the projection acts as the centering map on the support.
  double mean = 0.0;
  int support = 0;
  for (std::size_t a = 0; a < pi.size(); ++a) {
    if (pi[a] > 0.0) {
      mean += u[a];
      ++support;
    }
  }
  mean /= support;
  for (std::size_t a = 0; a < pi.size(); ++a) {
    if (pi[a] > 0.0) v[a] = (u[a] - mean) / reg.epsilon;
  }
  return v;
}

}  // namespace

std::vector<double> Flatten(const Profile& pi) {
  std::vector<double> out;
  for (const auto& s : pi) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::vector<double> Flatten(const std::vector<std::vector<double>>& blocks) {
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<std::vector<double>> Split(const std::vector<double>& flat,
                                       const std::vector<int>& sizes, int offset) {
  std::vector<std::vector<double>> out;
  for (int m : sizes) {
    if (offset + m > static_cast<int>(flat.size())) {
      throw InvalidInputError("flat vector too short to split");
    }
    out.emplace_back(flat.begin() + offset, flat.begin() + offset + m);
    offset += m;
  }
  return out;
}

std::vector<std::vector<double>> ReplicatorRhs(const FiniteGame& game, const Profile& pi) {
  ValidateProfile(game, pi);
  const auto raw = Raw(pi);
  std::vector<std::vector<double>> d;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto u = UtilityVector(game, raw, i);
    double avg = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) avg += raw[i][a] * u[a];
    std::vector<double> di(u.size());
    for (std::size_t a = 0; a < u.size(); ++a) di[a] = raw[i][a] * (u[a] - avg);
    d.push_back(std::move(di));
  }
  return d;
}

SbrDerivative SbrRhs(const FiniteGame& game, const std::vector<std::vector<double>>& u_hat,
                     const Profile& pi, const Regularizer& reg) {
  ValidateProfile(game, pi);
  SbrDerivative d;
  const auto raw = Raw(pi);
  for (int i = 0; i < game.num_players(); ++i) {
    const auto u = UtilityVector(game, raw, i);
    const Simplex qr = QuantalResponse(u_hat.at(i), reg);
    std::vector<double> ds(u.size());
    std::vector<double> dp(u.size());
    for (std::size_t a = 0; a < u.size(); ++a) {
      ds[a] = u[a] - u_hat[i][a];
      dp[a] = qr[a] - raw[i][a];
    }
    d.score.push_back(std::move(ds));
    d.strategy.push_back(std::move(dp));
  }
  return d;
}

std::vector<std::vector<double>> SbrSingleTimescaleRhs(const FiniteGame& game,
                                                       const Profile& pi,
                                                       const Regularizer& reg) {
  ValidateProfile(game, pi);
  const auto raw = Raw(pi);
  std::vector<std::vector<double>> d;
  for (int i = 0; i < game.num_players(); ++i) {
    const Simplex qr = QuantalResponse(UtilityVector(game, raw, i), reg);
    std::vector<double> dp(qr.size());
    for (std::size_t a = 0; a < dp.size(); ++a) dp[a] = qr[a] - raw[i][a];
    d.push_back(std::move(dp));
  }
  return d;
}

std::vector<std::vector<double>> BrRhs(const FiniteGame& game, const Profile& pi,
                                       TieRule selection) {
  if (selection != TieRule::kLowestIndex) {
    throw InvalidInputError("best-response flow needs a deterministic selection");
  }
  ValidateProfile(game, pi);
  const auto raw = Raw(pi);
  std::vector<std::vector<double>> d;
  for (int i = 0; i < game.num_players(); ++i) {
    const Simplex br = BestResponse(UtilityVector(game, raw, i), selection);
    std::vector<double> dp(br.size());
    for (std::size_t a = 0; a < dp.size(); ++a) dp[a] = br[a] - raw[i][a];
    d.push_back(std::move(dp));
  }
  return d;
}

std::vector<std::vector<double>> DaFlowRhs(const FiniteGame& game,
                                           const std::vector<std::vector<double>>& u_hat,
                                           const Regularizer& reg) {
  if (static_cast<int>(u_hat.size()) != game.num_players()) {
    throw InvalidInputError("score has wrong player count");
  }
  std::vector<std::vector<double>> pi;
  for (const auto& s : u_hat) pi.push_back(QuantalResponse(s, reg).values());
  return JointUtility(game, pi);
}

std::vector<std::vector<double>> DaStrategyVelocity(const FiniteGame& game,
                                                    const std::vector<std::vector<double>>& u_hat,
                                                    const Regularizer& reg) {
  std::vector<std::vector<double>> pi;
  for (const auto& s : u_hat) pi.push_back(QuantalResponse(s, reg).values());
  const auto u = JointUtility(game, pi);
  std::vector<std::vector<double>> v;
  for (int i = 0; i < game.num_players(); ++i) v.push_back(MirrorVelocity(pi[i], u[i], reg));
  return v;
}

// ---------------------------------------------------------------- replicator

ReplicatorFlow::ReplicatorFlow(FiniteGame game) : game_(std::move(game)) {}

int ReplicatorFlow::dimension() const { return Total(game_); }

std::vector<double> ReplicatorFlow::Derivative(const std::vector<double>& y) const {
  const auto pi = Split(y, Sizes(game_));
  std::vector<double> d;
  for (int i = 0; i < game_.num_players(); ++i) {
    const auto u = UtilityVector(game_, pi, i);
    double avg = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) avg += pi[i][a] * u[a];
    for (std::size_t a = 0; a < u.size(); ++a) d.push_back(pi[i][a] * (u[a] - avg));
  }
  return d;
}

std::vector<std::pair<int, int>> ReplicatorFlow::simplex_blocks() const {
  return Blocks(game_, 0);
}

Profile ReplicatorFlow::Strategy(const std::vector<double>& y) const {
  return ToProfile(Split(y, Sizes(game_)));
}

std::vector<double> ReplicatorFlow::Lift(const Profile& pi) const {
  ValidateProfile(game_, pi);
  return Flatten(pi);
}

std::vector<double> ReplicatorFlow::StrategyVelocity(const std::vector<double>& y) const {
  return Derivative(y);
}

// ------------------------------------------------------------ dual averaging

DualAveragingFlow::DualAveragingFlow(FiniteGame game, Regularizer reg)
    : game_(std::move(game)), reg_(reg) {
  ValidateRegularizer(reg_);
}

int DualAveragingFlow::dimension() const { return Total(game_); }

std::vector<double> DualAveragingFlow::Derivative(const std::vector<double>& y) const {
  return Flatten(DaFlowRhs(game_, Split(y, Sizes(game_)), reg_));
}

Profile DualAveragingFlow::Strategy(const std::vector<double>& y) const {
  Profile out;
  for (const auto& s : Split(y, Sizes(game_))) out.push_back(QuantalResponse(s, reg_));
  return out;
}

std::vector<double> DualAveragingFlow::Lift(const Profile& pi) const {
  ValidateProfile(game_, pi);
  std::vector<double> y;
  for (const auto& s : pi) {
    for (double p : s) {
      if (reg_.kind == RegularizerKind::kEntropy) {
        if (p <= 0.0) throw DomainError("entropic score needs an interior strategy");
        y.push_back(reg_.epsilon * std::log(p));
      } else {
        y.push_back(reg_.epsilon * p);
      }
    }
  }
  return y;
}

std::vector<double> DualAveragingFlow::StrategyVelocity(const std::vector<double>& y) const {
  return Flatten(DaStrategyVelocity(game_, Split(y, Sizes(game_)), reg_));
}

// --------------------------------------------------- smoothed best response

SmoothedBestResponseFlow::SmoothedBestResponseFlow(FiniteGame game, Regularizer reg,
                                                   bool two_timescale)
    : game_(std::move(game)), reg_(reg), two_timescale_(two_timescale) {
  ValidateRegularizer(reg_);
}

int SmoothedBestResponseFlow::strategy_offset() const {
  return two_timescale_ ? Total(game_) : 0;
}

int SmoothedBestResponseFlow::dimension() const { return strategy_offset() + Total(game_); }

std::vector<double> SmoothedBestResponseFlow::Derivative(const std::vector<double>& y) const {
  const auto pi = Split(y, Sizes(game_), strategy_offset());
  std::vector<double> d;
  if (!two_timescale_) {
    for (int i = 0; i < game_.num_players(); ++i) {
      const Simplex qr = QuantalResponse(UtilityVector(game_, pi, i), reg_);
      for (std::size_t a = 0; a < qr.size(); ++a) d.push_back(qr[a] - pi[i][a]);
    }
    return d;
  }
  const auto score = Split(y, Sizes(game_), 0);
  std::vector<double> dp;
  for (int i = 0; i < game_.num_players(); ++i) {
    const auto u = UtilityVector(game_, pi, i);
    const Simplex qr = QuantalResponse(score[i], reg_);
    for (std::size_t a = 0; a < u.size(); ++a) {
      d.push_back(u[a] - score[i][a]);
      dp.push_back(qr[a] - pi[i][a]);
    }
  }
  d.insert(d.end(), dp.begin(), dp.end());
  return d;
}

std::vector<std::pair<int, int>> SmoothedBestResponseFlow::simplex_blocks() const {
  return Blocks(game_, strategy_offset());
}

Profile SmoothedBestResponseFlow::Strategy(const std::vector<double>& y) const {
  return ToProfile(Split(y, Sizes(game_), strategy_offset()));
}

std::vector<double> SmoothedBestResponseFlow::Lift(const Profile& pi) const {
  ValidateProfile(game_, pi);
  std::vector<double> y;
  if (two_timescale_) y = Flatten(JointUtilityVector(game_, pi));
  const auto p = Flatten(pi);
  y.insert(y.end(), p.begin(), p.end());
  return y;
}

std::vector<double> SmoothedBestResponseFlow::StrategyVelocity(
    const std::vector<double>& y) const {
  const auto d = Derivative(y);
  return std::vector<double>(d.begin() + strategy_offset(), d.end());
}

// ------------------------------------------------------------ best response

BestResponseFlow::BestResponseFlow(FiniteGame game, TieRule selection)
    : game_(std::move(game)), selection_(selection) {
  if (selection_ != TieRule::kLowestIndex) {
    throw InvalidInputError("best-response flow needs a deterministic selection");
  }
}

int BestResponseFlow::dimension() const { return Total(game_); }

std::vector<double> BestResponseFlow::Derivative(const std::vector<double>& y) const {
  const auto pi = Split(y, Sizes(game_));
  std::vector<double> d;
  for (int i = 0; i < game_.num_players(); ++i) {
    const Simplex br = BestResponse(UtilityVector(game_, pi, i), selection_);
    for (std::size_t a = 0; a < br.size(); ++a) d.push_back(br[a] - pi[i][a]);
  }
  return d;
}

std::vector<std::pair<int, int>> BestResponseFlow::simplex_blocks() const {
  return Blocks(game_, 0);
}

Profile BestResponseFlow::Strategy(const std::vector<double>& y) const {
  return ToProfile(Split(y, Sizes(game_)));
}

std::vector<double> BestResponseFlow::Lift(const Profile& pi) const {
  ValidateProfile(game_, pi);
  return Flatten(pi);
}

std::vector<double> BestResponseFlow::StrategyVelocity(const std::vector<double>& y) const {
  return Derivative(y);
}

std::string BestResponseFlow::metadata() const { return "selection=lowest_index"; }

std::unique_ptr<FlowSystem> MakeFlow(const std::string& name, const FiniteGame& game,
                                     const Regularizer& reg) {
  if (name == "replicator") return std::make_unique<ReplicatorFlow>(game);
  if (name == "da_flow") return std::make_unique<DualAveragingFlow>(game, reg);
  if (name == "sbr_flow") return std::make_unique<SmoothedBestResponseFlow>(game, reg, true);
  if (name == "sbr_flow_single") {
    return std::make_unique<SmoothedBestResponseFlow>(game, reg, false);
  }
  if (name == "br_flow") return std::make_unique<BestResponseFlow>(game);
  throw InvalidInputError("unknown flow '" + name + "'");
}

// -------------------------------------------------------------- integration

namespace {

void CheckFinite(const std::vector<double>& y, double t) {
  for (double v : y) {
    if (!std::isfinite(v)) throw IntegrationError("non-finite flow state", t);
  }
}

// Returns the drift corrected.
double Renormalize(std::vector<double>& y, const std::vector<std::pair<int, int>>& blocks,
                   double t) {
  double worst = 0.0;
  for (auto [off, len] : blocks) {
    double sum = 0.0;
    for (int a = off; a < off + len; ++a) {
      if (y[a] < 0.0) {
        if (y[a] < -kFlowSimplexTolerance) {
          throw IntegrationError("strategy left the simplex", t);
        }
        worst = std::max(worst, -y[a]);
        y[a] = 0.0;
      }
      sum += y[a];
    }
    const double drift = std::abs(sum - 1.0);
    worst = std::max(worst, drift);
    if (drift > kFlowSimplexTolerance) {
      throw IntegrationError("simplex drift " + std::to_string(drift), t);
    }
    if (drift > 0.0) {
      for (int a = off; a < off + len; ++a) y[a] /= sum;
    }
  }
  return worst;
}

void Axpy(std::vector<double>& out, const std::vector<double>& y, double h,
          const std::vector<double>& k) {
  out.resize(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) out[j] = y[j] + h * k[j];
}

}  // namespace

FlowTrajectory Integrate(const FlowSystem& system, const std::vector<double>& y0,
                         double t_end, double dt, IntegrationMethod method,
                         std::int64_t sample_stride) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw InvalidInputError("t_end must be finite and nonnegative");
  }
  if (sample_stride < 1) throw InvalidInputError("sample stride must be positive");
  if (static_cast<int>(y0.size()) != system.dimension()) {
    throw InvalidInputError("initial state has dimension " + std::to_string(y0.size()) +
                            ", expected " + std::to_string(system.dimension()));
  }
  const auto blocks = system.simplex_blocks();
  FlowTrajectory traj;
  traj.metadata = system.metadata();
  std::vector<double> y = y0;
  CheckFinite(y, 0.0);
  traj.max_simplex_drift = Renormalize(y, blocks, 0.0);
  traj.times.push_back(0.0);
  traj.states.push_back(y);

  const auto steps = static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
  std::vector<double> tmp;
  double t = 0.0;
  for (std::int64_t n = 1; n <= steps; ++n) {
    const double t_next = n == steps ? t_end : static_cast<double>(n) * dt;
    const double h = t_next - t;
    if (method == IntegrationMethod::kEuler) {
      const auto k1 = system.Derivative(y);
      Axpy(y, y, h, k1);
    } else {
      const auto k1 = system.Derivative(y);
      Axpy(tmp, y, 0.5 * h, k1);
      const auto k2 = system.Derivative(tmp);
      Axpy(tmp, y, 0.5 * h, k2);
      const auto k3 = system.Derivative(tmp);
      Axpy(tmp, y, h, k3);
      const auto k4 = system.Derivative(tmp);
      for (std::size_t j = 0; j < y.size(); ++j) {
        y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      }
    }
    t = t_next;
    CheckFinite(y, t);
    traj.max_simplex_drift = std::max(traj.max_simplex_drift, Renormalize(y, blocks, t));
    if (n % sample_stride == 0 || n == steps) {
      traj.times.push_back(t);
      traj.states.push_back(y);
    }
  }
  return traj;
}

}  // namespace nashflow
