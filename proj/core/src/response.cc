#include "nashflow/response.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nashflow/errors.h"

namespace nashflow {
namespace {

void CheckFinite(std::span<const double> u) {
  if (u.empty()) throw InvalidInputError("payoff vector is empty");
  for (double v : u) {
    if (!std::isfinite(v)) throw InvalidInputError("payoff vector is not finite");
  }
}

std::vector<double> Softmax(std::span<const double> y, double epsilon) {
  const double top = *std::max_element(y.begin(), y.end());
  std::vector<double> p(y.size());
  double z = 0.0;
  for (std::size_t a = 0; a < y.size(); ++a) {
    // Entropic choice never assigns exactly zero mass.
    p[a] = std::max(std::exp((y[a] - top) / epsilon),
                    std::numeric_limits<double>::denorm_min());
    z += p[a];
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace

void ValidateRegularizer(const Regularizer& reg) {
  if (!(reg.epsilon > 0.0) || !std::isfinite(reg.epsilon)) {
    throw InvalidInputError("regularizer epsilon must be positive and finite");
  }
}

std::vector<int> BestResponseSet(std::span<const double> u) {
  CheckFinite(u);
  const double top = *std::max_element(u.begin(), u.end());
  std::vector<int> out;
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (u[a] >= top - kBestResponseTolerance) out.push_back(static_cast<int>(a));
  }
  return out;
}

Simplex BestResponse(std::span<const double> u, TieRule rule, Rng* rng) {
  const auto set = BestResponseSet(u);
  int pick = set.front();
  if (rule == TieRule::kUniformOverArgmax && set.size() > 1) {
    if (rng == nullptr) throw InvalidInputError("uniform tie rule needs a random stream");
    pick = set[(*rng)() % set.size()];
  }
  return Simplex::Vertex(u.size(), static_cast<std::size_t>(pick));
}

Simplex QuantalResponse(std::span<const double> u, const Regularizer& reg) {
  CheckFinite(u);
  ValidateRegularizer(reg);
  if (reg.kind == RegularizerKind::kEntropy) return Simplex(Softmax(u, reg.epsilon));
  std::vector<double> scaled(u.begin(), u.end());
  for (double& v : scaled) v /= reg.epsilon;
  return Simplex(ProjectOntoSimplex(scaled));
}

std::vector<double> ProjectOntoSimplex(std::span<const double> x) {
  if (x.empty()) throw InvalidInputError("cannot project an empty vector");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumsum += sorted[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  std::vector<double> out(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) out[a] = std::max(x[a] - theta, 0.0);
  return out;
}

std::vector<double> EuclideanProject(std::span<const double> x, const ActionSet& set) {
  if (static_cast<int>(x.size()) != Dimension(set)) {
    throw InvalidInputError("projection dimension mismatch");
  }
  if (const auto* box = std::get_if<BoxSet>(&set)) {
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      out[k] = std::clamp(x[k], box->lower[k], box->upper[k]);
    }
    return out;
  }
  if (std::holds_alternative<SimplexSet>(set)) return ProjectOntoSimplex(x);
  const auto& h = std::get<HyperplaneSet>(set);
  double dot = 0.0;
  double nn = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    dot += h.normal[k] * x[k];
    nn += h.normal[k] * h.normal[k];
  }
  const double shift = (dot - h.offset) / nn;
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] -= shift * h.normal[k];
  return out;
}

std::vector<double> MirrorMap(std::span<const double> y, const Regularizer& reg,
                              const ActionSet& set) {
  ValidateRegularizer(reg);
  if (static_cast<int>(y.size()) != Dimension(set)) {
    throw InvalidInputError("mirror map dimension mismatch");
  }
  if (reg.kind == RegularizerKind::kEntropy) {
    if (!std::holds_alternative<SimplexSet>(set)) {
      throw InvalidInputError("entropic mirror map requires a simplex action set");
    }
    CheckFinite(y);
    return Softmax(y, reg.epsilon);
  }
  std::vector<double> scaled(y.begin(), y.end());
  for (double& v : scaled) v /= reg.epsilon;
  return EuclideanProject(scaled, set);
}

}  // namespace nashflow
