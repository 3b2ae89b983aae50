#include "nashflow/player_graph.h"

#include <algorithm>

#include "nashflow/errors.h"

namespace nashflow {

PlayerGraph::PlayerGraph(int num_nodes, const std::vector<std::pair<int, int>>& edges) {
  if (num_nodes <= 0) throw InvalidInputError("graph needs at least one node");
  adjacency_.resize(num_nodes);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes) {
      throw InvalidInputError("edge endpoint out of range");
    }
    if (a == b) throw InvalidInputError("self-loops are not allowed");
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nb : adjacency_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

PlayerGraph PlayerGraph::Path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return PlayerGraph(n, e);
}

PlayerGraph PlayerGraph::Complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  }
  return PlayerGraph(n, e);
}

PlayerGraph PlayerGraph::Empty(int n) { return PlayerGraph(n, {}); }

bool PlayerGraph::HasEdge(int a, int b) const {
  const auto& nb = adjacency_.at(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<std::pair<int, int>> PlayerGraph::Edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < num_nodes(); ++a) {
    for (int b : adjacency_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

}  // namespace nashflow
