// The capacitated dyadic tree G over a node placement and its directed
// augmentation with cache super-nodes.
//
// Vertex ids: internal vertices come first, ordered by level and then by
// cell, so vertex 0 is the root and (level, cell) has id
// (4^level - 1) / 3 + cell - 1. The n leaves follow in placement order.
// Every non-root vertex owns exactly one edge (to its parent); edge e is the
// edge above vertex e + 1.

#ifndef CACHECAP_TREEGRAPH_H_
#define CACHECAP_TREEGRAPH_H_

#include <map>
#include <vector>

#include "cachecap/placement.h"

namespace cachecap {

// c_e for an edge whose child sits at `level`. Internal levels 1..L(n) get
// (4^-level n)^(2 - min(3, alpha) / 2); the leaf level L(n) + 1 gets 1.
double EdgeCapacity(int level, int n, double alpha);

struct TreeVertex {
  int level = 0;
  int cell = 1;        // dyadic cell for internal vertices, 0 for leaves
  int parent = -1;
  int node = -1;       // wireless node id for leaves, -1 otherwise
};

class TreeGraph {
 public:
  // Throws std::invalid_argument unless alpha > 2.
  static TreeGraph Build(const NodePlacement& placement, double alpha);
  // Rebuilds from each node's level-L cell (1-based). Used by the JSON loader.
  static TreeGraph FromLeafCells(int n, double alpha,
                                 const std::vector<int>& leaf_cells);

  int n() const { return n_; }
  int depth() const { return depth_; }  // L(n)
  double alpha() const { return alpha_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return num_vertices() - 1; }
  int num_internal() const { return num_internal_; }

  const TreeVertex& vertex(int v) const { return vertices_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  bool IsLeaf(int v) const { return v >= num_internal_; }
  int LeafVertex(int node) const;
  int NodeOfLeaf(int v) const;
  int InternalVertex(int level, int cell) const;

  int EdgeChild(int e) const { return e + 1; }
  int EdgeParent(int e) const { return vertices_[e + 1].parent; }
  int EdgeLevel(int e) const { return vertices_[e + 1].level; }
  int EdgeAbove(int v) const { return v - 1; }
  double capacity(int e) const { return capacities_[e]; }
  const std::vector<double>& capacities() const { return capacities_; }

  // Edges of the unique path between two leaf vertices, ordered from u to w.
  // Empty when u == w. Throws std::invalid_argument for non-leaf endpoints.
  std::vector<int> UniquePath(int u_vertex, int w_vertex) const;
  // Same path addressed by wireless node ids.
  std::vector<int> LeafPath(int u_node, int w_node) const;
  // Vertices visited by LeafPath, endpoints included.
  std::vector<int> LeafPathVertices(int u_node, int w_node) const;

  // V_{level,i}: wireless nodes under a vertex, increasing.
  std::vector<int> NodesUnder(int v) const;
  int Depth(int v) const { return vertices_[v].level; }

 private:
  void Finish();

  int n_ = 0;
  int depth_ = 0;
  double alpha_ = 0.0;
  int num_internal_ = 0;
  std::vector<TreeVertex> vertices_;
  std::vector<std::vector<int>> children_;
  std::vector<double> capacities_;
};

// Directed edge of the augmented graph. Core edge 2e runs child -> parent,
// core edge 2e + 1 runs parent -> child; both carry c_e.
struct DirectedEdge {
  int tail = 0;
  int head = 0;
  double capacity = 0.0;
  bool unbounded = false;
};

// G~: two antiparallel copies of every tree edge plus one super-node per
// distinct cache set, wired to its member leaves by unbounded edges.
// Super-node k has vertex id tree.num_vertices() + k.
class DirectedCacheGraph {
 public:
  // Throws std::invalid_argument on an empty cache set or an invalid leaf.
  // Holds a pointer to `tree`, which must outlive the graph.
  static DirectedCacheGraph Build(const TreeGraph& tree,
                                  const std::vector<std::vector<int>>& cache_sets);

  const TreeGraph& tree() const { return *tree_; }
  int num_core_edges() const { return 2 * tree_->num_edges(); }
  DirectedEdge core_edge(int id) const;
  static int UpEdge(int e) { return 2 * e; }
  static int DownEdge(int e) { return 2 * e + 1; }

  int num_cache_nodes() const { return static_cast<int>(cache_sets_.size()); }
  const std::vector<int>& cache_members(int k) const { return cache_sets_[k]; }
  int CacheVertex(int k) const { return tree_->num_vertices() + k; }
  // Index of the super-node for a cache set, or -1.
  int FindCacheNode(const std::vector<int>& cache_set) const;
  // Unbounded edges (super-node -> member leaf).
  std::vector<DirectedEdge> CacheEdges() const;
  int num_cache_edges() const;

  // Directed core edges of the unique path from leaf node u to leaf node w.
  std::vector<int> CorePath(int u_node, int w_node) const;

 private:
  const TreeGraph* tree_ = nullptr;
  std::vector<std::vector<int>> cache_sets_;
  std::map<std::vector<int>, int> index_;
};

}  // namespace cachecap

#endif  // CACHECAP_TREEGRAPH_H_
