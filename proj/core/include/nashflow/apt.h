#pragma once

#include <vector>

#include "nashflow/flows.h"
#include "nashflow/schedule.h"
#include "nashflow/simplex.h"

namespace nashflow {

// Piecewise-linear interpolation of a strategy sequence on the mesh
// tau_0 = 0, tau_k = sum_{s<=k} rate(s).
class InterpolatedPath {
 public:
  InterpolatedPath(std::vector<Profile> iterates, const Schedule& rates);

  double end_time() const { return mesh_.back(); }
  const std::vector<double>& mesh() const { return mesh_; }
  // Concatenated strategy at time t, clamped to the last iterate beyond the end.
  std::vector<double> At(double t) const;
  Profile ProfileAt(double t) const;

 private:
  std::vector<std::vector<double>> points_;
  std::vector<int> sizes_;
  std::vector<double> mesh_;
};

struct AptPoint {
  double t = 0.0;
  double distance = 0.0;
};

struct AptReport {
  std::vector<AptPoint> points;
  // Mean distance over the later half of the anchors is below the mean over
  // the earlier half.
  bool tracking = false;
};

// For each anchor t, integrates `flow` over [0, window] from Lift(path(t)) and
// records sup_s ||path(t + s) - Strategy(flow(s))||_inf. Anchors whose window
// would run past the end of the path are skipped. Strategies with zero
// entries are pulled to the interior by `interior_floor` before lifting, since
// entropic lifts need strictly positive probabilities.
AptReport AptDistance(const std::vector<Profile>& iterates, const Schedule& rates,
                      const FlowSystem& flow, double window,
                      const std::vector<double>& anchors, double dt = 1e-3,
                      double interior_floor = 1e-12);

}  // namespace nashflow
