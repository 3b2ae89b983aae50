#include "nashflow/netapps/dml.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "nashflow/errors.h"
#include "nashflow/random.h"

namespace nashflow::netapps {
namespace {

double SqDist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return d;
}

double Loss(const DmlNode& node, const std::vector<double>& theta) {
  double l = 0.0;
  for (std::size_t r = 0; r < node.targets.size(); ++r) {
    double pred = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) pred += node.features[r][k] * theta[k];
    l += (pred - node.targets[r]) * (pred - node.targets[r]);
  }
  return l / (2.0 * static_cast<double>(node.targets.size()));
}

// Gradient of u_i with respect to theta_i, using only visible neighbors.
std::vector<double> ThetaGradient(const DmlInstance& inst,
                                  const std::vector<std::vector<double>>& theta,
                                  const std::vector<std::vector<double>>& e, int i) {
  const auto& node = inst.nodes[i];
  const double n = static_cast<double>(node.targets.size());
  std::vector<double> g(inst.dim, 0.0);
  for (std::size_t r = 0; r < node.targets.size(); ++r) {
    double pred = 0.0;
    for (int k = 0; k < inst.dim; ++k) pred += node.features[r][k] * theta[i][k];
    const double res = pred - node.targets[r];
    for (int k = 0; k < inst.dim; ++k) g[k] -= node.features[r][k] * res / n;
  }
  for (int j = 0; j < static_cast<int>(theta.size()); ++j) {
    if (j == i || e[i][j] < kDmlPruneThreshold) continue;
    for (int k = 0; k < inst.dim; ++k) {
      g[k] -= 2.0 * inst.alpha * e[i][j] * (theta[i][k] - theta[j][k]);
    }
  }
  return g;
}

}  // namespace

void ValidateDmlInstance(const DmlInstance& inst) {
  if (inst.nodes.empty()) throw InvalidInputError("dml needs at least one node");
  if (inst.dim < 1) throw InvalidInputError("parameter dimension must be positive");
  for (const auto& node : inst.nodes) {
    if (node.targets.empty() || node.features.size() != node.targets.size()) {
      throw InvalidInputError("node data must have matching nonzero row counts");
    }
    for (const auto& row : node.features) {
      if (static_cast<int>(row.size()) != inst.dim) {
        throw InvalidInputError("feature rows must have length dim");
      }
    }
  }
  if (!(inst.alpha >= 0.0) || !(inst.beta >= 0.0)) {
    throw InvalidInputError("cost coefficients must be nonnegative");
  }
  if (!(inst.inner_step > 0.0) || !(inst.outer_step > 0.0)) {
    throw InvalidInputError("step sizes must be positive");
  }
  if (!(inst.initial_weight >= 0.0 && inst.initial_weight <= 1.0)) {
    throw InvalidInputError("initial link weight must lie in [0, 1]");
  }
  if (!(inst.inner_tol > 0.0)) throw InvalidInputError("inner tolerance must be positive");
}

DmlInstance SyntheticDml(int nodes, int dim, int samples, std::uint64_t seed, double noise) {
  if (nodes < 1 || dim < 1 || samples < 1) {
    throw InvalidInputError("synthetic dml sizes must be positive");
  }
  Rng rng = Rng::Stream(seed, {static_cast<std::uint64_t>(StreamPurpose::kInstance), 0x646d6c});
  std::vector<double> truth(dim);
  for (double& v : truth) v = 2.0 * rng.Uniform() - 1.0;
  DmlInstance inst;
  inst.dim = dim;
  for (int i = 0; i < nodes; ++i) {
    DmlNode node;
    for (int r = 0; r < samples; ++r) {
      std::vector<double> x(dim);
      double y = 0.0;
      for (int k = 0; k < dim; ++k) {
        x[k] = 2.0 * rng.Uniform() - 1.0;
        y += x[k] * truth[k];
      }
      y += noise * (2.0 * rng.Uniform() - 1.0);
      node.features.push_back(std::move(x));
      node.targets.push_back(y);
    }
    inst.nodes.push_back(std::move(node));
  }
  return inst;
}

double DmlUtility(const DmlInstance& inst, const std::vector<std::vector<double>>& theta,
                  const std::vector<std::vector<double>>& e, int node) {
  double cost = 0.0;
  double norm = 0.0;
  for (int j = 0; j < static_cast<int>(theta.size()); ++j) {
    if (j == node) continue;
    cost += e[node][j] * SqDist(theta[node], theta[j]);
    norm += e[node][j] * e[node][j];
  }
  return -Loss(inst.nodes[node], theta[node]) - inst.alpha * cost - inst.beta * norm;
}

std::vector<std::vector<double>> LocalLeastSquares(const DmlInstance& inst) {
  ValidateDmlInstance(inst);
  std::vector<std::vector<double>> out;
  for (const auto& node : inst.nodes) {
    const int n = static_cast<int>(node.targets.size());
    Eigen::MatrixXd x(n, inst.dim);
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
      for (int k = 0; k < inst.dim; ++k) x(r, k) = node.features[r][k];
      y(r) = node.targets[r];
    }
    const Eigen::VectorXd sol = x.colPivHouseholderQr().solve(y);
    out.emplace_back(sol.data(), sol.data() + sol.size());
  }
  return out;
}

DmlResult RunDml(const DmlInstance& inst, int inner_iters, int outer_iters, std::uint64_t seed) {
  ValidateDmlInstance(inst);
  if (inner_iters < 1 || outer_iters < 0) {
    throw InvalidInputError("need inner_iters >= 1 and outer_iters >= 0");
  }
  const int n = static_cast<int>(inst.nodes.size());
  DmlResult res;
  res.theta.assign(n, std::vector<double>(inst.dim));
  for (int i = 0; i < n; ++i) {
    Rng r = PlayerStream(seed, StreamPurpose::kInstance, i, 0);
    for (double& v : res.theta[i]) v = 0.1 * (2.0 * r.Uniform() - 1.0);
  }
  res.e.assign(n, std::vector<double>(n, inst.initial_weight));
  for (int i = 0; i < n; ++i) res.e[i][i] = 0.0;

  auto total = [&]() {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += DmlUtility(inst, res.theta, res.e, i);
    return t;
  };

  // Inner loop: Euclidean mirror descent on theta. On an unconstrained
  // parameter space the mirror map is the identity, so Y and theta coincide.
  auto inner = [&]() {
    int it = 0;
    for (; it < inner_iters; ++it) {
      std::vector<std::vector<double>> grads(n);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        grads[i] = ThetaGradient(inst, res.theta, res.e, i);
        double g2 = 0.0;
        for (double v : grads[i]) g2 += v * v;
        worst = std::max(worst, std::sqrt(g2));
      }
      if (!std::isfinite(worst) || worst > 1e12) {
        throw StepSizeError("inner mirror descent diverged; reduce inner_step below " +
                            std::to_string(inst.inner_step));
      }
      if (worst <= inst.inner_tol) break;
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < inst.dim; ++k) res.theta[i][k] += inst.inner_step * grads[i][k];
      }
    }
    res.inner_iterations.push_back(it);
  };

  inner();
  res.total_utility.push_back(total());
  for (int outer = 1; outer <= outer_iters; ++outer) {
    auto next = res.e;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double grad = -inst.alpha * SqDist(res.theta[i], res.theta[j]) -
                            2.0 * inst.beta * res.e[i][j];
        next[i][j] = std::clamp(res.e[i][j] + inst.outer_step * grad, 0.0, 1.0);
      }
    }
    res.e = std::move(next);
    inner();
    res.total_utility.push_back(total());
    if (res.total_utility.back() < res.total_utility[res.total_utility.size() - 2]) {
      res.utility_decreases.push_back(outer);
    }
  }
  return res;
}

}  // namespace nashflow::netapps
