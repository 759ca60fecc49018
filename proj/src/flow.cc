#include "cachecap/flow.h"

#include <algorithm>
#include <limits>

namespace cachecap {

std::vector<double> ComputeLoads(const TreeGraph& tree,
                                 const std::vector<PathFlow>& paths,
                                 bool directed) {
  std::vector<double> loads(directed ? 2 * tree.num_edges() : tree.num_edges(), 0.0);
  for (const PathFlow& p : paths) {
    if (p.rate == 0.0) continue;
    if (!directed) {
      for (int e : tree.LeafPath(p.source, p.dest)) loads[e] += p.rate;
      continue;
    }
    // Climb from both ends; the source side goes up, the destination side down.
    int a = tree.LeafVertex(p.source);
    int b = tree.LeafVertex(p.dest);
    while (a != b) {
      loads[2 * tree.EdgeAbove(a)] += p.rate;
      loads[2 * tree.EdgeAbove(b) + 1] += p.rate;
      a = tree.vertex(a).parent;
      b = tree.vertex(b).parent;
    }
  }
  return loads;
}

void RefreshLoads(const TreeGraph& tree, FlowSolution& flow) {
  flow.loads = ComputeLoads(tree, flow.paths, flow.directed);
}

double MaxOverload(const TreeGraph& tree, const FlowSolution& flow) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < flow.loads.size(); ++i) {
    const int e = flow.directed ? static_cast<int>(i / 2) : static_cast<int>(i);
    worst = std::max(worst, flow.loads[i] - tree.capacity(e));
  }
  return worst;
}

double Delivered(const FlowSolution& flow, const CacheSet& caches, int dest) {
  double total = 0.0;
  for (const PathFlow& p : flow.paths) {
    if (p.dest == dest && p.caches == caches) total += p.rate;
  }
  return total;
}

}  // namespace cachecap
