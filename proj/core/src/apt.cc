#include "nashflow/apt.h"

#include <algorithm>
#include <cmath>

#include "nashflow/errors.h"

namespace nashflow {

InterpolatedPath::InterpolatedPath(std::vector<Profile> iterates, const Schedule& rates) {
  if (iterates.empty()) throw InvalidInputError("interpolation needs at least one iterate");
  for (const auto& s : iterates.front()) sizes_.push_back(static_cast<int>(s.size()));
  mesh_.push_back(0.0);
  for (std::size_t k = 0; k < iterates.size(); ++k) {
    if (iterates[k].size() != sizes_.size()) {
      throw InvalidInputError("iterates have inconsistent player counts");
    }
    std::vector<double> flat;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (static_cast<int>(iterates[k][i].size()) != sizes_[i]) {
        throw InvalidInputError("iterates have inconsistent dimensions");
      }
      flat.insert(flat.end(), iterates[k][i].begin(), iterates[k][i].end());
    }
    points_.push_back(std::move(flat));
    if (k > 0) mesh_.push_back(mesh_.back() + rates.value(static_cast<std::int64_t>(k)));
  }
}

std::vector<double> InterpolatedPath::At(double t) const {
  if (t <= 0.0) return points_.front();
  if (t >= mesh_.back()) return points_.back();
  const auto it = std::upper_bound(mesh_.begin(), mesh_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - mesh_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - mesh_[lo]) / (mesh_[hi] - mesh_[lo]);
  std::vector<double> out(points_[lo].size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (1.0 - w) * points_[lo][j] + w * points_[hi][j];
  }
  return out;
}

Profile InterpolatedPath::ProfileAt(double t) const {
  return ToProfile(Split(At(t), sizes_));
}

AptReport AptDistance(const std::vector<Profile>& iterates, const Schedule& rates,
                      const FlowSystem& flow, double window,
                      const std::vector<double>& anchors, double dt, double interior_floor) {
  if (!(window > 0.0)) throw InvalidInputError("window must be positive");
  const InterpolatedPath path(iterates, rates);
  AptReport report;
  for (double t : anchors) {
    if (t < 0.0 || t + window > path.end_time()) continue;
    Profile start;
    for (const auto& s : path.ProfileAt(t)) start.push_back(EnsureFloor(s, interior_floor));
    const auto y0 = flow.Lift(start);
    if (static_cast<int>(y0.size()) != flow.dimension()) {
      throw InvalidInputError("flow and trajectory dimensions differ");
    }
    const FlowTrajectory ft = Integrate(flow, y0, window, dt);
    double sup = 0.0;
    for (std::size_t n = 0; n < ft.times.size(); ++n) {
      const auto pi = Flatten(flow.Strategy(ft.states[n]));
      const auto ref = path.At(t + ft.times[n]);
      if (pi.size() != ref.size()) throw InvalidInputError("flow and trajectory dimensions differ");
      sup = std::max(sup, LinfDistance(pi, ref));
    }
    report.points.push_back({t, sup});
  }
  const std::size_t n = report.points.size();
  if (n >= 2) {
    double early = 0.0;
    double late = 0.0;
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < half; ++j) early += report.points[j].distance;
    for (std::size_t j = n - half; j < n; ++j) late += report.points[j].distance;
    report.tracking = late < early;
  }
  return report;
}

}  // namespace nashflow
