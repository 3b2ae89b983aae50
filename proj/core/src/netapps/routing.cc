#include "nashflow/netapps/routing.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "nashflow/errors.h"

namespace nashflow::netapps {
namespace {

constexpr std::int64_t kMaxRoutingCells = 1'000'000;

struct Adjacent {
  int node;
  int edge;
};

std::vector<std::vector<Adjacent>> Adjacency(const RoutingInstance& inst) {
  std::vector<std::vector<Adjacent>> adj(inst.num_nodes);
  for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
    adj[inst.edges[e].from].push_back({inst.edges[e].to, e});
    adj[inst.edges[e].to].push_back({inst.edges[e].from, e});
  }
  return adj;
}

// Cheapest edge between two adjacent nodes, by delay then index.
int EdgeBetween(const RoutingInstance& inst, int a, int b) {
  int best = -1;
  for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
    const auto& ed = inst.edges[e];
    if ((ed.from == a && ed.to == b) || (ed.from == b && ed.to == a)) {
      if (best < 0 || ed.delay < inst.edges[best].delay) best = e;
    }
  }
  return best;
}

double PathDelay(const RoutingInstance& inst, const std::vector<int>& path) {
  double d = 0.0;
  for (std::size_t h = 0; h + 1 < path.size(); ++h) {
    d += inst.edges[EdgeBetween(inst, path[h], path[h + 1])].delay;
  }
  return d;
}

// Dijkstra avoiding banned nodes and directed hops. Ties resolve toward the
// smaller predecessor index so results are reproducible.
std::vector<int> Dijkstra(const RoutingInstance& inst,
                          const std::vector<std::vector<Adjacent>>& adj, int src, int dst,
                          const std::vector<bool>& banned_node,
                          const std::set<std::pair<int, int>>& banned_hop) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(inst.num_nodes, inf);
  std::vector<int> prev(inst.num_nodes, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == dst) break;
    for (const auto& nb : adj[u]) {
      if (banned_node[nb.node] || banned_hop.count({u, nb.node})) continue;
      const double nd = d + inst.edges[nb.edge].delay;
      if (nd < dist[nb.node] || (nd == dist[nb.node] && u < prev[nb.node])) {
        dist[nb.node] = nd;
        prev[nb.node] = u;
        pq.push({nd, nb.node});
      }
    }
  }
  if (dist[dst] == inf) return {};
  std::vector<int> path;
  for (int v = dst; v != -1; v = prev[v]) {
    path.push_back(v);
    if (v == src) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

void ValidateRoutingInstance(const RoutingInstance& inst) {
  if (inst.num_nodes < 2) throw InvalidInputError("routing graph needs at least two nodes");
  auto in_range = [&](int v) { return v >= 0 && v < inst.num_nodes; };
  if (!in_range(inst.source) || !in_range(inst.destination) ||
      inst.source == inst.destination) {
    throw InvalidInputError("source and destination must be distinct valid nodes");
  }
  for (const auto& e : inst.edges) {
    if (!in_range(e.from) || !in_range(e.to) || e.from == e.to) {
      throw InvalidInputError("routing edge endpoints invalid");
    }
    if (!(e.success > 0.0 && e.success <= 1.0)) {
      throw InvalidInputError("edge success probability must lie in (0, 1]");
    }
    if (!(e.delay >= 0.0) || !std::isfinite(e.delay)) {
      throw InvalidInputError("edge delay must be finite and nonnegative");
    }
  }
  if (inst.max_paths < 1) throw InvalidInputError("max_paths must be positive");
  if (!(inst.tradeoff >= 0.0)) throw InvalidInputError("tradeoff weight must be >= 0");
  if (!(inst.degradation > 0.0 && inst.degradation < 1.0)) {
    throw InvalidInputError("degradation factor must lie in (0, 1)");
  }
  for (const auto& r : inst.jammer_nodes) {
    if (r.empty()) throw InvalidInputError("every jammer needs a feasible node");
    for (int v : r) {
      if (!in_range(v)) throw InvalidInputError("jammer node out of range");
    }
  }
}

RoutingInstance DemoRoutingInstance() {
  RoutingInstance r;
  r.num_nodes = 5;
  r.edges = {{0, 1, 0.95, 1.0}, {1, 4, 0.95, 1.0}, {0, 2, 0.9, 1.5},
             {2, 4, 0.9, 1.5},  {0, 3, 0.85, 2.0}, {3, 4, 0.85, 2.0}};
  r.source = 0;
  r.destination = 4;
  r.jammer_nodes = {{1}};
  r.tradeoff = 0.05;
  return r;
}

std::vector<std::vector<int>> ShortestPaths(const RoutingInstance& inst, int k) {
  ValidateRoutingInstance(inst);
  const auto adj = Adjacency(inst);
  std::vector<bool> none(inst.num_nodes, false);
  std::vector<std::vector<int>> found;
  auto first = Dijkstra(inst, adj, inst.source, inst.destination, none, {});
  if (first.empty()) return found;
  found.push_back(first);
  // Candidates ordered by (delay, node sequence).
  std::set<std::pair<double, std::vector<int>>> candidates;
  while (static_cast<int>(found.size()) < k) {
    const auto& last = found.back();
    for (std::size_t spur = 0; spur + 1 < last.size(); ++spur) {
      const std::vector<int> root(last.begin(), last.begin() + spur + 1);
      std::set<std::pair<int, int>> banned_hop;
      for (const auto& p : found) {
        if (p.size() > spur && std::equal(root.begin(), root.end(), p.begin())) {
          banned_hop.insert({p[spur], p[spur + 1]});
        }
      }
      std::vector<bool> banned_node(inst.num_nodes, false);
      for (std::size_t r = 0; r < spur; ++r) banned_node[root[r]] = true;
      auto tail = Dijkstra(inst, adj, root.back(), inst.destination, banned_node, banned_hop);
      if (tail.empty()) continue;
      std::vector<int> full(root.begin(), root.end() - 1);
      full.insert(full.end(), tail.begin(), tail.end());
      candidates.insert({PathDelay(inst, full), full});
    }
    bool added = false;
    while (!candidates.empty()) {
      auto best = *candidates.begin();
      candidates.erase(candidates.begin());
      if (std::find(found.begin(), found.end(), best.second) == found.end()) {
        found.push_back(best.second);
        added = true;
        break;
      }
    }
    if (!added) break;
  }
  return found;
}

double PathPayoff(const RoutingInstance& inst, const std::vector<int>& path,
                  const std::vector<int>& jammed) {
  double total = 0.0;
  for (std::size_t h = 0; h + 1 < path.size(); ++h) {
    const auto& e = inst.edges[EdgeBetween(inst, path[h], path[h + 1])];
    double q = e.success;
    const bool hit = std::find(jammed.begin(), jammed.end(), path[h]) != jammed.end() ||
                     std::find(jammed.begin(), jammed.end(), path[h + 1]) != jammed.end();
    if (hit) q *= inst.degradation;
    total += std::log(q) - inst.tradeoff * e.delay;
  }
  return total;
}

RoutingGame BuildRoutingGame(const RoutingInstance& inst) {
  auto paths = ShortestPaths(inst, inst.max_paths);
  if (paths.empty()) throw InvalidInputError("destination unreachable from source");

  std::vector<std::vector<int>> jams{{}};
  for (const auto& feasible : inst.jammer_nodes) {
    std::vector<std::vector<int>> next;
    for (const auto& partial : jams) {
      for (int v : feasible) {
        auto j = partial;
        j.push_back(v);
        next.push_back(std::move(j));
      }
    }
    jams = std::move(next);
    if (static_cast<std::int64_t>(jams.size()) * static_cast<std::int64_t>(paths.size()) >
        kMaxRoutingCells) {
      throw ResourceError("routing game exceeds " + std::to_string(kMaxRoutingCells) +
                          " cells");
    }
  }
  const int np = static_cast<int>(paths.size());
  const int nj = static_cast<int>(jams.size());
  std::vector<std::vector<double>> t(2, std::vector<double>(static_cast<std::size_t>(np) * nj));
  for (int p = 0; p < np; ++p) {
    for (int j = 0; j < nj; ++j) {
      const double v = PathPayoff(inst, paths[p], jams[j]);
      t[0][static_cast<std::size_t>(p) * nj + j] = v;
      t[1][static_cast<std::size_t>(p) * nj + j] = -v;
    }
  }
  return {FiniteGame({np, nj}, std::move(t)), std::move(paths), std::move(jams)};
}

RoutingRun RunSecureRouting(const RoutingInstance& inst, const LearnerConfig& learner,
                            std::int64_t rounds, std::uint64_t seed) {
  RoutingRun run{BuildRoutingGame(inst), {}, {}, {}, 0.0};
  FeedbackConfig fb;
  fb.kind = FeedbackKind::Individual();
  run.trajectory = RunRepeatedGame(run.routing.game, {learner, learner}, fb, rounds, seed);
  const Profile final = FinalProfile(run.trajectory);
  run.final_path_distribution = final[0].values();

  const int np = static_cast<int>(run.routing.paths.size());
  run.empirical_path_frequency.assign(np, 0.0);
  for (std::int64_t k = 1; k <= rounds; ++k) {
    run.empirical_path_frequency[run.trajectory.rows[k][0].action] += 1.0;
  }
  if (rounds > 0) {
    for (double& f : run.empirical_path_frequency) f /= static_cast<double>(rounds);
  }

  std::map<int, double> node_mass;
  for (std::size_t j = 0; j < run.routing.jam_actions.size(); ++j) {
    std::set<int> distinct(run.routing.jam_actions[j].begin(), run.routing.jam_actions[j].end());
    for (int v : distinct) node_mass[v] += final[1][j];
  }
  std::set<int> favored;
  for (auto [v, m] : node_mass) {
    if (m >= 0.5) favored.insert(v);
  }
  for (int p = 0; p < np; ++p) {
    const auto& path = run.routing.paths[p];
    const bool clear = std::none_of(path.begin(), path.end(),
                                    [&](int v) { return favored.count(v) > 0; });
    if (clear) run.mass_avoiding_jammers += final[0][p];
  }
  return run;
}

}  // namespace nashflow::netapps
