// Dinic's max-flow on real capacities, plus the single-source ratio cut
// that both the flow and the cut side of the tree bounds reduce to.

#ifndef CACHECAP_MAXFLOW_H_
#define CACHECAP_MAXFLOW_H_

#include <vector>

#include "cachecap/treegraph.h"

namespace cachecap {

class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes);

  // Arc tail -> head; `reverse_capacity` > 0 makes it an undirected pair.
  // Infinite capacities are allowed. Returns the arc id.
  int AddArc(int tail, int head, double capacity, double reverse_capacity = 0.0);
  double Run(int source, int sink);
  // Net flow tail -> head on an arc returned by AddArc.
  double Flow(int arc) const;
  // Nodes reachable from `source` in the residual graph after Run.
  std::vector<char> SourceSide(int source) const;

 private:
  struct Arc {
    int head;
    double residual;
    double flow;
  };
  bool Levels(int source, int sink);
  double Augment(int v, int sink, double limit);

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  double scale_ = 1.0;
};

// min over vertex sets S of G with sources in S of
//   c(delta S) / sum_{w not in S} weight_w,
// over sets with positive weight outside. The minimizing S is reported as a
// vertex mask. Computed by Dinkelbach iteration on parametric max-flows.
struct RatioCut {
  double ratio = 0.0;
  bool infinite = false;  // no set has positive weight outside
  std::vector<char> source_side;
};

RatioCut SingleSourceRatioCut(const TreeGraph& tree,
                              const std::vector<int>& source_leaves,
                              const std::vector<double>& leaf_weight);

// Tree-edge flows (child -> parent positive) that send phi * weight_w from
// the source leaves to every leaf w. `delivered` gets the rate each leaf
// actually receives.
struct SingleSourceFlow {
  std::vector<double> edge_flow;
  std::vector<double> source_out;
  std::vector<double> delivered;
};

SingleSourceFlow RouteSingleSource(const TreeGraph& tree,
                                   const std::vector<int>& source_leaves,
                                   const std::vector<double>& leaf_weight,
                                   double phi);

}  // namespace cachecap

#endif  // CACHECAP_MAXFLOW_H_
