#include "cachecap/treegraph.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cachecap {

namespace {

int LevelOffset(int level) { return ((1 << (2 * level)) - 1) / 3; }

}  // namespace

double EdgeCapacity(int level, int n, double alpha) {
  const int depth = ComputeL(n);
  if (level < 1 || level > depth + 1) {
    throw std::out_of_range("edge level " + std::to_string(level) +
                            " outside 1.." + std::to_string(depth + 1));
  }
  if (level == depth + 1) return 1.0;
  const double exponent = 2.0 - std::min(3.0, alpha) / 2.0;
  return std::pow(std::pow(4.0, -level) * n, exponent);
}

TreeGraph TreeGraph::Build(const NodePlacement& placement, double alpha) {
  if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent must exceed 2");
  const int depth = ComputeL(placement.n);
  std::vector<int> leaf_cells(placement.n);
  for (int v = 0; v < placement.n; ++v) {
    leaf_cells[v] = DyadicCell(placement, v, depth).cell;
  }
  return FromLeafCells(placement.n, alpha, leaf_cells);
}

TreeGraph TreeGraph::FromLeafCells(int n, double alpha,
                                   const std::vector<int>& leaf_cells) {
  if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent must exceed 2");
  if (n <= 0 || static_cast<int>(leaf_cells.size()) != n) {
    throw std::invalid_argument("leaf cell list does not match n");
  }
  TreeGraph tree;
  tree.n_ = n;
  tree.depth_ = ComputeL(n);
  tree.alpha_ = alpha;
  tree.num_internal_ = LevelOffset(tree.depth_ + 1);
  tree.vertices_.reserve(tree.num_internal_ + n);
  for (int level = 0; level <= tree.depth_; ++level) {
    const int cells = 1 << (2 * level);
    for (int cell = 1; cell <= cells; ++cell) {
      TreeVertex vertex;
      vertex.level = level;
      vertex.cell = cell;
      if (level > 0) {
        const DyadicIndex up = DyadicIndex{level, cell}.Parent();
        vertex.parent = LevelOffset(level - 1) + up.cell - 1;
      }
      tree.vertices_.push_back(vertex);
    }
  }
  const int cells_at_depth = 1 << (2 * tree.depth_);
  for (int node = 0; node < n; ++node) {
    const int cell = leaf_cells[node];
    if (cell < 1 || cell > cells_at_depth) {
      throw std::invalid_argument("leaf cell out of range");
    }
    TreeVertex leaf;
    leaf.level = tree.depth_ + 1;
    leaf.cell = 0;
    leaf.parent = LevelOffset(tree.depth_) + cell - 1;
    leaf.node = node;
    tree.vertices_.push_back(leaf);
  }
  tree.Finish();
  return tree;
}

void TreeGraph::Finish() {
  children_.assign(vertices_.size(), {});
  capacities_.assign(vertices_.size() - 1, 0.0);
  for (int v = 1; v < num_vertices(); ++v) {
    children_[vertices_[v].parent].push_back(v);
    capacities_[v - 1] = EdgeCapacity(vertices_[v].level, n_, alpha_);
  }
}

int TreeGraph::LeafVertex(int node) const {
  if (node < 0 || node >= n_) {
    throw std::out_of_range("invalid node id " + std::to_string(node));
  }
  return num_internal_ + node;
}

int TreeGraph::NodeOfLeaf(int v) const {
  if (!IsLeaf(v) || v >= num_vertices()) {
    throw std::invalid_argument("vertex " + std::to_string(v) + " is not a leaf");
  }
  return v - num_internal_;
}

int TreeGraph::InternalVertex(int level, int cell) const {
  if (level < 0 || level > depth_ || cell < 1 || cell > (1 << (2 * level))) {
    throw std::out_of_range("no internal vertex at that level/cell");
  }
  return LevelOffset(level) + cell - 1;
}

std::vector<int> TreeGraph::UniquePath(int u_vertex, int w_vertex) const {
  for (int v : {u_vertex, w_vertex}) {
    if (v < num_internal_ || v >= num_vertices()) {
      throw std::invalid_argument("path endpoint " + std::to_string(v) +
                                  " is not a leaf");
    }
  }
  std::vector<int> up;
  std::vector<int> down;
  int a = u_vertex;
  int b = w_vertex;
  // All leaves sit at the same depth, so both sides climb in lockstep.
  while (a != b) {
    up.push_back(EdgeAbove(a));
    down.push_back(EdgeAbove(b));
    a = vertices_[a].parent;
    b = vertices_[b].parent;
  }
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::vector<int> TreeGraph::LeafPath(int u_node, int w_node) const {
  return UniquePath(LeafVertex(u_node), LeafVertex(w_node));
}

std::vector<int> TreeGraph::LeafPathVertices(int u_node, int w_node) const {
  std::vector<int> up{LeafVertex(u_node)};
  std::vector<int> down{LeafVertex(w_node)};
  while (up.back() != down.back()) {
    up.push_back(vertices_[up.back()].parent);
    down.push_back(vertices_[down.back()].parent);
  }
  up.insert(up.end(), down.rbegin() + 1, down.rend());
  return up;
}

std::vector<int> TreeGraph::NodesUnder(int v) const {
  std::vector<int> nodes;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (IsLeaf(x)) {
      nodes.push_back(vertices_[x].node);
    } else {
      for (int c : children_[x]) stack.push_back(c);
    }
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

DirectedCacheGraph DirectedCacheGraph::Build(
    const TreeGraph& tree, const std::vector<std::vector<int>>& cache_sets) {
  DirectedCacheGraph graph;
  graph.tree_ = &tree;
  for (std::vector<int> set : cache_sets) {
    if (set.empty()) {
      throw std::invalid_argument("empty cache set has no super-node");
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (int u : set) {
      if (u < 0 || u >= tree.n()) {
        throw std::invalid_argument("cache member is not a leaf");
      }
    }
    if (graph.index_.count(set)) continue;
    graph.index_.emplace(set, graph.num_cache_nodes());
    graph.cache_sets_.push_back(std::move(set));
  }
  return graph;
}

DirectedEdge DirectedCacheGraph::core_edge(int id) const {
  const int e = id / 2;
  const int child = tree_->EdgeChild(e);
  const int parent = tree_->EdgeParent(e);
  DirectedEdge edge;
  edge.capacity = tree_->capacity(e);
  edge.tail = id % 2 == 0 ? child : parent;
  edge.head = id % 2 == 0 ? parent : child;
  return edge;
}

int DirectedCacheGraph::FindCacheNode(const std::vector<int>& cache_set) const {
  std::vector<int> key = cache_set;
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  const auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

std::vector<DirectedEdge> DirectedCacheGraph::CacheEdges() const {
  std::vector<DirectedEdge> edges;
  for (int k = 0; k < num_cache_nodes(); ++k) {
    for (int u : cache_sets_[k]) {
      edges.push_back({CacheVertex(k), tree_->LeafVertex(u), 0.0, true});
    }
  }
  return edges;
}

int DirectedCacheGraph::num_cache_edges() const {
  int count = 0;
  for (const auto& set : cache_sets_) count += static_cast<int>(set.size());
  return count;
}

std::vector<int> DirectedCacheGraph::CorePath(int u_node, int w_node) const {
  const int u = tree_->LeafVertex(u_node);
  const int w = tree_->LeafVertex(w_node);
  std::vector<int> path;
  std::vector<int> down;
  int a = u;
  int b = w;
  while (a != b) {
    path.push_back(UpEdge(tree_->EdgeAbove(a)));
    down.push_back(DownEdge(tree_->EdgeAbove(b)));
    a = tree_->vertex(a).parent;
    b = tree_->vertex(b).parent;
  }
  path.insert(path.end(), down.rbegin(), down.rend());
  return path;
}

}  // namespace cachecap
