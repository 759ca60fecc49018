// Flow-level model of content delivery: data-layer routing, cooperation-layer
// bookkeeping of which node holds which bits of a message, and per-edge
// volume accounting.

#ifndef CACHECAP_SCHEME_H_
#define CACHECAP_SCHEME_H_

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "cachecap/flow.h"
#include "cachecap/placement.h"
#include "cachecap/traffic.h"
#include "cachecap/treegraph.h"

namespace cachecap {

struct ByteRange {
  std::int64_t offset = 0;
  std::int64_t length = 0;
};

// Which bit ranges of message `id` each node holds.
struct MessageLedger {
  int id = 0;
  std::int64_t total_size = 0;
  std::map<int, std::vector<ByteRange>> holdings;

  std::int64_t Held(int node) const;
  std::int64_t TotalHeld() const;
  bool Disjoint() const;
  // Union of held ranges is exactly [0, total_size).
  bool Complete() const;
};

// The whole range [offset, offset + length) of a message sits at one node.
MessageLedger ConcentratedLedger(int id, std::int64_t total_size, int node,
                                 std::int64_t offset, std::int64_t length);

// Every node of `nodes` holds floor or ceil of TotalHeld / |nodes| bits and
// nobody else holds anything.
bool FullyDistributed(const MessageLedger& ledger, const std::vector<int>& nodes);

// Every holder splits its bits into |receivers| balanced parts and hands one
// to each receiver. Split points rotate across senders so that receiver
// totals differ by at most one bit. Throws on an empty receiver set.
MessageLedger RedistributeHop(const MessageLedger& ledger, const std::vector<int>& receivers);

// One cooperation hop between a dyadic cell and its parent or child. Throws
// std::invalid_argument when the cells are not adjacent in the hierarchy, the
// destination cell is empty, or the ledger is not spread over `from`.
MessageLedger CooperateHop(const MessageLedger& ledger, const DyadicIndex& from,
                           const DyadicIndex& to, const NodePlacement& placement);

// phi-optimal flow refined so that, among optimal flows, edge utilizations
// are lexicographically min-max. Symmetric caches therefore share a request
// evenly. Large programs skip the refinement.
FlowSolution RouteDataLayer(const TreeGraph& tree, const CachingTraffic& traffic);

struct HopRecord {
  int edge = 0;
  int senders = 0;
  int receivers = 0;
  std::int64_t bits = 0;
};

struct MessageTrace {
  CacheSet caches;
  int dest = 0;
  std::int64_t size = 0;
  std::vector<PathFlow> parts;  // rate holds the part size in bits
  std::vector<std::int64_t> edge_bits;
  bool conserved = true;
  bool complete = false;
};

struct DeliveryTrace {
  double phi = 0.0;
  FlowSolution flow;
  std::vector<std::int64_t> edge_bits;
  std::vector<MessageTrace> messages;
  int hops = 0;

  bool AllComplete() const;
  bool AllConserved() const;
};

using SizeMap = std::map<CachingTraffic::Key, std::int64_t>;

// Routes the traffic, splits each message across its cache paths in
// proportion to the flow, and walks every part up and down the dyadic cells
// of its path. Each part starts concentrated at its cache leaf. Throws
// std::runtime_error when phi is zero and std::invalid_argument when a
// request has no size.
DeliveryTrace SimulateDelivery(const TreeGraph& tree, const CachingTraffic& traffic,
                               const SizeMap& sizes,
                               const std::function<void(const HopRecord&)>& observer = {});

// Integer split of `total` proportional to `weights` by largest remainder.
std::vector<std::int64_t> ProportionalSplit(std::int64_t total, const std::vector<double>& weights);

}  // namespace cachecap

#endif  // CACHECAP_SCHEME_H_
