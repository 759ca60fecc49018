// Path flows over the tree graph and their per-edge loads.

#ifndef CACHECAP_FLOW_H_
#define CACHECAP_FLOW_H_

#include <vector>

#include "cachecap/traffic.h"
#include "cachecap/treegraph.h"

namespace cachecap {

// f_{p,U}: rate on the unique path from cache member `source` to `dest`,
// attributed to cache set `caches`.
struct PathFlow {
  CacheSet caches;
  int source = 0;
  int dest = 0;
  double rate = 0.0;
};

struct FlowSolution {
  // Loads are per tree edge when false, per directed core edge (2e + dir)
  // when true.
  bool directed = false;
  std::vector<PathFlow> paths;
  std::vector<double> loads;
};

std::vector<double> ComputeLoads(const TreeGraph& tree,
                                 const std::vector<PathFlow>& paths,
                                 bool directed);

// Fills flow.loads from flow.paths.
void RefreshLoads(const TreeGraph& tree, FlowSolution& flow);

// Largest load_e - c_e (negative when every edge has slack).
double MaxOverload(const TreeGraph& tree, const FlowSolution& flow);

// Total rate delivered to (U, w).
double Delivered(const FlowSolution& flow, const CacheSet& caches, int dest);

}  // namespace cachecap

#endif  // CACHECAP_FLOW_H_
