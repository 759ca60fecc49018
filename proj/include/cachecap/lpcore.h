// The path-flow programs over the tree: phi(lambda), the directed concurrent
// flow over the cache-augmented graph with its duals, and maximum sum rates.

#ifndef CACHECAP_LPCORE_H_
#define CACHECAP_LPCORE_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cachecap/flow.h"
#include "cachecap/lp.h"
#include "cachecap/placement.h"
#include "cachecap/traffic.h"
#include "cachecap/treegraph.h"

namespace cachecap {

enum class PhiMethod {
  kAuto,           // max-flow when all demand shares one cache set, else LP
  kLinearProgram,
  kMaxFlow,        // requires a single distinct cache set
};

struct PhiResult {
  double value = 0.0;  // +inf when infinite
  bool infinite = false;
  bool forced_zero = false;    // some entry has an empty cache set
  int trivially_infinite = 0;  // entries with w in U, left out of the program
  std::string method;          // "lp", "maxflow", "fixed-paths" or "none"
  FlowSolution flow;
  LPSolution lp;               // filled by the LP route only
};

// Largest phi such that phi * lambda is routable on the tree. Throws
// std::runtime_error if the solver reports a numerical failure.
PhiResult Phi(const TreeGraph& tree, const CachingTraffic& traffic,
              PhiMethod method = PhiMethod::kAuto);

// Same program with every request pinned to the path from its geographically
// nearest cache (ties to the lower id).
PhiResult PhiNearestCache(const TreeGraph& tree, const NodePlacement& placement,
                          const CachingTraffic& traffic);

// lambda~^uc on the augmented graph: the rate of (U, w) moves to the pair
// (super-node of U, w). Entries with an empty U or with w in U are dropped.
UnicastTraffic DirectedUnicast(const DirectedCacheGraph& graph,
                               const CachingTraffic& traffic);

struct DualSolution {
  std::vector<double> edge_price;  // m_e per directed core edge
  std::map<std::pair<int, int>, double> demand_price;  // d_{u,w} from the basis
  std::map<std::pair<int, int>, double> distance;      // shortest-path d*_{u,w}
  double objective = 0.0;  // sum_e c_e m_e
};

struct DirectedFlowResult {
  double phi_tilde = 0.0;
  bool infinite = false;
  FlowSolution flow;
  DualSolution duals;
  LPSolution lp;
};

// Sources of `unicast` must be cache super-node indices of `graph`.
DirectedFlowResult ConcurrentFlowDirected(const DirectedCacheGraph& graph,
                                          const UnicastTraffic& unicast);

struct SumRateResult {
  double sigma = 0.0;
  bool infinite = false;
  FlowSolution flow;
  LPSolution lp;
};

// Pairs are (super-node index, leaf node).
SumRateResult MaxSumRateDirected(const DirectedCacheGraph& graph,
                                 const std::vector<std::pair<int, int>>& pairs);

// Pairs are leaf pairs on the undirected tree.
SumRateResult MaxSumRateTree(const TreeGraph& tree,
                             const std::vector<std::pair<int, int>>& pairs);

}  // namespace cachecap

#endif  // CACHECAP_LPCORE_H_
