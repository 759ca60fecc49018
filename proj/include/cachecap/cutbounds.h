// Cut-side bounds on the tree: rho-hat, the dual bottleneck pair set, the tree
// multicut, and the report chaining flow and cut values together.

#ifndef CACHECAP_CUTBOUNDS_H_
#define CACHECAP_CUTBOUNDS_H_

#include <string>
#include <utility>
#include <vector>

#include "cachecap/lpcore.h"
#include "cachecap/traffic.h"
#include "cachecap/treegraph.h"

namespace cachecap {

inline constexpr int kMaxBruteForceVertices = 26;
inline constexpr int kMaxTreeSearchCacheSets = 20;

// A vertex set S of G with the capacity leaving it and the caching demand
// that has all caches inside S and the destination outside.
struct CutSpec {
  std::vector<char> in_s;
  double capacity_across = 0.0;
  double demand_across = 0.0;

  // capacity / demand; +inf when demand is zero.
  double ratio() const;
  std::vector<int> Members() const;
};

CutSpec EvaluateCut(const TreeGraph& tree, const CachingTraffic& traffic,
                    std::vector<char> in_s);

struct RhoHat {
  double value = 0.0;
  bool infinite = false;
  CutSpec witness;
};

// Exhaustive Gray-code search over all 2^|V_G| sets. Throws std::length_error
// above kMaxBruteForceVertices vertices.
RhoHat RhoHatBruteForce(const TreeGraph& tree, const CachingTraffic& traffic);

// Exact search over unions of cache sets; each union is a single-source ratio
// cut. Throws std::length_error above kMaxTreeSearchCacheSets distinct sets.
RhoHat RhoHatTree(const TreeGraph& tree, const CachingTraffic& traffic);

// (1 + ln(2 n^4)) and 1 / (16 (1 + ln(2 n^4))).
double LogFactor(int n);
double B4(int n);

struct BottleneckSet {
  std::vector<std::pair<int, int>> pairs;  // (super-node, leaf)
  int buckets = 0;        // K, distinct nonzero d* values
  int chosen_bucket = 0;  // k_i, 1-based
  double threshold = 0.0; // d*_{k_i}
  double cumulative = 0.0;  // s_i
  double demand = 0.0;      // lambda~_F
};

// Buckets the shortest-path duals d* of the directed concurrent flow and
// returns the pairs whose d* reaches the first bucket meeting
//   d*_{k_i} >= 1 / (2 s_i (1 + ln 2n^4)).
// `unicast` must be normalized. Throws std::logic_error when the duals break
// the bounds K <= n^2, d* <= n^2, or no bucket qualifies.
BottleneckSet BottleneckPairs(const DualSolution& duals, const UnicastTraffic& unicast,
                              int n);

struct Multicut {
  std::vector<int> edges;
  double cost = 0.0;
  std::vector<int> component;  // component id per vertex of G
  int num_components = 0;
  double packed_flow = 0.0;    // flow routed by the primal-dual phase
};

// Primal-dual multicut on the tree: pairs in order of decreasing LCA depth
// saturate their paths, then saturated edges are deleted in reverse while the
// set still separates every pair. Throws std::invalid_argument on a pair with
// identical endpoints.
Multicut TreeMulticut(const TreeGraph& tree, const std::vector<std::pair<int, int>>& pairs);

bool SeparatesAll(const TreeGraph& tree, const Multicut& cut,
                  const std::vector<std::pair<int, int>>& pairs);

struct SandwichReport {
  int n = 0;
  double b4 = 0.0;
  double log_factor = 0.0;
  double phi = 0.0;
  double rhohat = 0.0;
  std::string rhohat_method;
  CutSpec witness;
  double phi_tilde = 0.0;
  double dual_objective = 0.0;
  BottleneckSet bottleneck;
  double sigma_tilde = 0.0;   // directed sum rate over the bottleneck pairs
  std::vector<std::pair<int, int>> induced_pairs;
  double sigma = 0.0;         // undirected sum rate over the induced leaf pairs
  Multicut multicut;
  double boundary_sum = 0.0;  // sum_i c(delta S_i) over multicut components
  double component_demand = 0.0;  // sum_i lambda_{S_i^c}

  bool flow_le_cut = false;       // phi <= rhohat
  bool directed_half = false;     // phi >= phi~ / 2
  bool bottleneck_bound = false;  // phi~ >= sigma~ / (2 log_factor lambda~_F)
  bool sum_rate_cut = false;      // sigma~ / lambda~_F >= rhohat / 4
  bool core_sum_rate = false;     // sigma~ >= sigma
  bool multicut_half = false;     // sigma >= c_M / 2
  bool boundary_identity = false; // c_M = boundary_sum / 2
  bool component_demand_ok = false;  // lambda~_F <= component_demand
  bool sandwich_ok = false;       // b4 rhohat <= phi <= rhohat

  bool AllHold() const;
};

// Runs the whole chain on normalized traffic, after dropping requests served
// by their own cache. Throws std::invalid_argument on empty cache sets or
// when no other request remains.
SandwichReport Sandwich(const TreeGraph& tree, const CachingTraffic& traffic,
                        double tolerance = 1e-6);

}  // namespace cachecap

#endif  // CACHECAP_CUTBOUNDS_H_
