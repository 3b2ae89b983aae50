#pragma once

// Independent reference implementations used by the tests. Each one is
// deliberately naive: brute-force enumeration, finite differences, or dense
// Gaussian elimination.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "nashflow/continuous_game.h"
#include "nashflow/finite_game.h"
#include "nashflow/random.h"
#include "nashflow/simplex.h"

namespace oracle {

// Joint pure actions enumerated by recursion rather than the library's
// flattening code.
inline void ForEachJoint(const std::vector<int>& counts,
                         const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> a(counts.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == counts.size()) {
      f(a);
      return;
    }
    for (int x = 0; x < counts[j]; ++x) {
      a[j] = x;
      rec(j + 1);
    }
  };
  rec(0);
}

inline double ExpectedUtility(const nashflow::FiniteGame& g,
                              const std::vector<std::vector<double>>& pi, int player) {
  double total = 0.0;
  ForEachJoint(g.action_counts(), [&](const std::vector<int>& a) {
    double w = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) w *= pi[j][a[j]];
    total += w * g.payoff(player, a);
  });
  return total;
}

inline std::vector<double> UtilityVector(const nashflow::FiniteGame& g,
                                         std::vector<std::vector<double>> pi, int player) {
  std::vector<double> out(g.num_actions(player));
  for (int x = 0; x < g.num_actions(player); ++x) {
    pi[player].assign(g.num_actions(player), 0.0);
    pi[player][x] = 1.0;
    out[x] = oracle::ExpectedUtility(g, pi, player);
  }
  return out;
}

inline double SviResidual(const nashflow::FiniteGame& g,
                          const std::vector<std::vector<double>>& pi) {
  double r = 0.0;
  for (int i = 0; i < g.num_players(); ++i) {
    const auto u = oracle::UtilityVector(g, pi, i);
    r += *std::max_element(u.begin(), u.end()) - oracle::ExpectedUtility(g, pi, i);
  }
  return r;
}

struct PureNe {
  std::vector<int> actions;
  bool strict;
};

inline std::vector<PureNe> PureNash(const nashflow::FiniteGame& g) {
  std::vector<PureNe> out;
  ForEachJoint(g.action_counts(), [&](const std::vector<int>& a) {
    bool ne = true, strict = true;
    for (int i = 0; i < g.num_players(); ++i) {
      auto b = a;
      for (int x = 0; x < g.num_actions(i); ++x) {
        if (x == a[i]) continue;
        b[i] = x;
        const double d = g.payoff(i, b) - g.payoff(i, a);
        if (d > 0) ne = false;
        if (d >= 0) strict = false;
      }
    }
    if (ne) out.push_back({a, strict});
  });
  return out;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> GaussSolve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

// Euclidean projection onto the simplex by trying every support: on a support
// S the KKT point is y_S shifted by a common constant.
inline std::vector<double> SimplexProjection(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int cnt = 0;
    for (std::size_t a = 0; a < n; ++a) {
      if (mask & (1u << a)) {
        sum += y[a];
        ++cnt;
      }
    }
    const double shift = (sum - 1.0) / cnt;
    std::vector<double> x(n, 0.0);
    bool ok = true;
    for (std::size_t a = 0; a < n; ++a) {
      if (mask & (1u << a)) {
        x[a] = y[a] - shift;
        if (x[a] < 0) ok = false;
      }
    }
    if (!ok) continue;
    double d = 0.0;
    for (std::size_t a = 0; a < n; ++a) d += (x[a] - y[a]) * (x[a] - y[a]);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  return best;
}

inline std::vector<double> Softmax(const std::vector<double>& u, double eps) {
  std::vector<double> e(u.size());
  double z = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) z += (e[a] = std::exp(u[a] / eps));
  for (double& v : e) v /= z;
  return e;
}

// Central differences of an arbitrary scalar function of one coordinate block.
inline std::vector<double> FiniteDiff(const std::function<double(const std::vector<double>&)>& f,
                                      const std::vector<double>& x, double h = 1e-5) {
  std::vector<double> d(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    auto p = x, m = x;
    p[k] += h;
    m[k] -= h;
    d[k] = (f(p) - f(m)) / (2 * h);
  }
  return d;
}

inline std::vector<double> RandomPoint(int n, nashflow::Rng& rng) {
  std::vector<double> e(n);
  double s = 0.0;
  for (double& v : e) s += (v = -std::log(1.0 - rng.Uniform()));
  for (double& v : e) v /= s;
  return e;
}

inline std::vector<std::vector<double>> RandomProfile(const std::vector<int>& counts,
                                                      nashflow::Rng& rng) {
  std::vector<std::vector<double>> p;
  for (int m : counts) p.push_back(RandomPoint(m, rng));
  return p;
}

}  // namespace oracle
