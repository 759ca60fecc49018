// Sparse caching and unicast traffic matrices and the scenario generators.

#ifndef CACHECAP_TRAFFIC_H_
#define CACHECAP_TRAFFIC_H_

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "cachecap/placement.h"

namespace cachecap {

struct FlowSolution;

// Sorted, duplicate-free leaf ids.
using CacheSet = std::vector<int>;

CacheSet CanonicalCacheSet(std::vector<int> ids);

struct TrafficEntry {
  CacheSet caches;
  int dest = 0;
  double rate = 0.0;
};

// lambda_{U,w}, stored only on its support.
class CachingTraffic {
 public:
  using Key = std::pair<CacheSet, int>;

  CachingTraffic() = default;
  explicit CachingTraffic(int n) : n_(n) {}

  // Accumulates onto an existing entry. Zero rates are ignored; negative
  // rates and out-of-range ids throw std::invalid_argument.
  void Add(std::vector<int> caches, int dest, double rate);

  int n() const { return n_; }
  const std::map<Key, double>& entries() const { return entries_; }
  std::size_t support() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double Total() const;
  double Rate(const std::vector<int>& caches, int dest) const;
  std::vector<TrafficEntry> List() const;
  // Distinct nonempty cache sets, in key order.
  std::vector<CacheSet> CacheSets() const;

  // w in U: any rate is achievable.
  static bool TriviallyInfinite(const Key& key);

 private:
  int n_ = 0;
  std::map<Key, double> entries_;
};

// Scales rates to sum to 1. Throws std::domain_error on all-zero traffic.
CachingTraffic Normalize(const CachingTraffic& traffic);

// lambda^uc. Sources are leaf node ids, or cache super-node indices of a
// DirectedCacheGraph when domain == kCacheNode.
struct UnicastTraffic {
  enum class Domain { kLeaf, kCacheNode };
  Domain domain = Domain::kLeaf;
  std::map<std::pair<int, int>, double> entries;

  void Add(int source, int dest, double rate);
  double Total() const;
};

// lambda^uc_{u,w} = sum of the flow on the u -> w path over all cache sets.
UnicastTraffic CachingToUnicast(const FlowSolution& flow);

// Two-level example: every w_i in cell (2,1) asks for its own message, cached
// at a dedicated node u_i of cell (2,16) and at a shared node u* of cell
// (2,3) nearest to the centre of cell (2,1). Rate 1 per pair. Throws
// std::invalid_argument when any of the three cells is empty or L(n) < 1.
CachingTraffic ScenarioNearest(const NodePlacement& placement);
// The shared node u* used above.
int NearestSharedCache(const NodePlacement& placement);

// round(n^beta) distinct random caches each hold everything; every node
// requests rate 1 from that set.
CachingTraffic ScenarioComplete(const NodePlacement& placement, double beta,
                                std::uint64_t seed);

}  // namespace cachecap

#endif  // CACHECAP_TRAFFIC_H_
