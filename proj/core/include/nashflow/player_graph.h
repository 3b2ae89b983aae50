#pragma once

#include <utility>
#include <vector>

namespace nashflow {

// Undirected simple graph over players.
class PlayerGraph {
 public:
  PlayerGraph(int num_nodes, const std::vector<std::pair<int, int>>& edges);

  static PlayerGraph Path(int n);
  static PlayerGraph Complete(int n);
  static PlayerGraph Empty(int n);

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  // Sorted neighbor list of `node`.
  const std::vector<int>& neighbors(int node) const { return adjacency_.at(node); }
  bool HasEdge(int a, int b) const;
  std::vector<std::pair<int, int>> Edges() const;

 private:
  std::vector<std::vector<int>> adjacency_;
};

}  // namespace nashflow
