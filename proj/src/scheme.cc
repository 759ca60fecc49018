#include "cachecap/scheme.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cachecap/lp.h"
#include "cachecap/lpcore.h"

namespace cachecap {

namespace {

constexpr int kRefineVariableLimit = 2000;

std::vector<ByteRange> Coalesce(std::vector<ByteRange> ranges) {
  std::sort(ranges.begin(), ranges.end(),
            [](const ByteRange& a, const ByteRange& b) { return a.offset < b.offset; });
  std::vector<ByteRange> out;
  for (const ByteRange& r : ranges) {
    if (r.length == 0) continue;
    if (!out.empty() && out.back().offset + out.back().length == r.offset) {
      out.back().length += r.length;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<ByteRange> AllRanges(const MessageLedger& ledger) {
  std::vector<ByteRange> all;
  for (const auto& [node, ranges] : ledger.holdings) all.insert(all.end(), ranges.begin(), ranges.end());
  std::sort(all.begin(), all.end(),
            [](const ByteRange& a, const ByteRange& b) { return a.offset < b.offset; });
  return all;
}

}  // namespace

std::int64_t MessageLedger::Held(int node) const {
  const auto it = holdings.find(node);
  if (it == holdings.end()) return 0;
  std::int64_t total = 0;
  for (const ByteRange& r : it->second) total += r.length;
  return total;
}

std::int64_t MessageLedger::TotalHeld() const {
  std::int64_t total = 0;
  for (const auto& [node, ranges] : holdings) total += Held(node);
  return total;
}

bool MessageLedger::Disjoint() const {
  const std::vector<ByteRange> all = AllRanges(*this);
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i - 1].offset + all[i - 1].length > all[i].offset) return false;
  }
  return true;
}

bool MessageLedger::Complete() const {
  if (!Disjoint()) return false;
  std::int64_t cursor = 0;
  for (const ByteRange& r : AllRanges(*this)) {
    if (r.length == 0) continue;
    if (r.offset != cursor) return false;
    cursor += r.length;
  }
  return cursor == total_size;
}

MessageLedger ConcentratedLedger(int id, std::int64_t total_size, int node,
                                 std::int64_t offset, std::int64_t length) {
  if (offset < 0 || length < 0 || offset + length > total_size) {
    throw std::invalid_argument("range outside the message");
  }
  MessageLedger ledger;
  ledger.id = id;
  ledger.total_size = total_size;
  if (length > 0) ledger.holdings[node] = {{offset, length}};
  return ledger;
}

bool FullyDistributed(const MessageLedger& ledger, const std::vector<int>& nodes) {
  if (nodes.empty()) return false;
  const std::int64_t total = ledger.TotalHeld();
  const std::int64_t low = total / static_cast<std::int64_t>(nodes.size());
  const std::int64_t high = low + (total % static_cast<std::int64_t>(nodes.size()) ? 1 : 0);
  for (const auto& [node, ranges] : ledger.holdings) {
    if (ledger.Held(node) > 0 && !std::binary_search(nodes.begin(), nodes.end(), node)) {
      return false;
    }
  }
  for (int node : nodes) {
    const std::int64_t held = ledger.Held(node);
    if (held < low || held > high) return false;
  }
  return ledger.Disjoint();
}

MessageLedger RedistributeHop(const MessageLedger& ledger, const std::vector<int>& receivers) {
  if (receivers.empty()) throw std::invalid_argument("hop needs at least one receiver");
  const auto count = static_cast<std::int64_t>(receivers.size());
  MessageLedger next;
  next.id = ledger.id;
  next.total_size = ledger.total_size;
  std::map<int, std::vector<ByteRange>> gathered;
  std::int64_t rotation = 0;
  for (const auto& [sender, held_ranges] : ledger.holdings) {
    std::vector<ByteRange> ranges = Coalesce(held_ranges);
    std::int64_t amount = 0;
    for (const ByteRange& r : ranges) amount += r.length;
    const std::int64_t base = amount / count;
    const std::int64_t extra = amount % count;
    std::size_t index = 0;
    std::int64_t used = 0;  // consumed from ranges[index]
    for (std::int64_t j = 0; j < count; ++j) {
      std::int64_t want = base + (((j - rotation) % count + count) % count < extra ? 1 : 0);
      auto& target = gathered[receivers[j]];
      while (want > 0) {
        const ByteRange& r = ranges[index];
        const std::int64_t take = std::min(want, r.length - used);
        target.push_back({r.offset + used, take});
        used += take;
        want -= take;
        if (used == r.length) {
          ++index;
          used = 0;
        }
      }
    }
    rotation = (rotation + extra) % count;
  }
  for (auto& [node, ranges] : gathered) {
    std::vector<ByteRange> merged = Coalesce(std::move(ranges));
    if (!merged.empty()) next.holdings[node] = std::move(merged);
  }
  return next;
}

MessageLedger CooperateHop(const MessageLedger& ledger, const DyadicIndex& from,
                           const DyadicIndex& to, const NodePlacement& placement) {
  const bool up = to.level + 1 == from.level && to.Contains(from);
  const bool down = from.level + 1 == to.level && from.Contains(to);
  if (!up && !down) throw std::invalid_argument("cells are not parent and child");
  const std::vector<int> senders = NodesInCell(placement, from);
  if (!FullyDistributed(ledger, senders)) {
    throw std::invalid_argument("message is not spread over the source cell");
  }
  const std::vector<int> receivers = NodesInCell(placement, to);
  if (receivers.empty()) throw std::invalid_argument("destination cell is empty");
  return RedistributeHop(ledger, receivers);
}

std::vector<std::int64_t> ProportionalSplit(std::int64_t total, const std::vector<double>& weights) {
  std::vector<std::int64_t> parts(weights.size(), 0);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(sum > 0.0)) {
    if (!weights.empty()) parts[0] = total;
    return parts;
  }
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    parts[i] = static_cast<std::int64_t>(std::floor(exact));
    assigned += parts[i];
    remainders.emplace_back(exact - static_cast<double>(parts[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % remainders.size()) {
    ++parts[remainders[k].second];
    ++assigned;
  }
  return parts;
}

namespace {

// Lexicographic min-max utilization among flows that keep phi.
FlowSolution Refine(const TreeGraph& tree, const CachingTraffic& traffic, double phi) {
  std::vector<PathFlow> columns;
  std::vector<std::vector<int>> users(tree.num_edges());
  std::vector<std::pair<std::vector<int>, double>> demands;
  for (const auto& [key, rate] : traffic.entries()) {
    if (key.first.empty() || CachingTraffic::TriviallyInfinite(key)) continue;
    std::vector<int> vars;
    for (int u : key.first) {
      vars.push_back(static_cast<int>(columns.size()));
      for (int e : tree.LeafPath(u, key.second)) users[e].push_back(static_cast<int>(columns.size()));
      columns.push_back({key.first, u, key.second, 0.0});
    }
    demands.emplace_back(std::move(vars), rate * phi * (1.0 - 1e-9));
  }
  std::vector<double> fixed(tree.num_edges(), -1.0);
  int open = 0;
  for (int e = 0; e < tree.num_edges(); ++e) open += users[e].empty() ? 0 : 1;
  std::vector<double> best;
  for (int round = 0; round < 64 && open > 0; ++round) {
    LPInstance lp;
    lp.maximize = false;
    for (std::size_t i = 0; i < columns.size(); ++i) lp.AddVariable(0.0);
    const int t = lp.AddVariable(1.0, "t");
    for (const auto& [vars, need] : demands) {
      std::vector<std::pair<int, double>> terms;
      for (int v : vars) terms.emplace_back(v, 1.0);
      lp.AddRow(std::move(terms), RowSense::kGreaterEqual, need);
    }
    std::vector<int> row_edge;
    for (int e = 0; e < tree.num_edges(); ++e) {
      if (users[e].empty()) continue;
      std::vector<std::pair<int, double>> terms;
      for (int v : users[e]) terms.emplace_back(v, 1.0);
      if (fixed[e] >= 0.0) {
        lp.AddRow(std::move(terms), RowSense::kLessEqual,
                  fixed[e] * tree.capacity(e) * (1.0 + 1e-9) + 1e-12);
      } else {
        terms.emplace_back(t, -tree.capacity(e));
        lp.AddRow(std::move(terms), RowSense::kLessEqual, 0.0);
      }
      row_edge.push_back(e);
    }
    const LPSolution solution = SolveLP(lp);
    if (solution.status != LPStatus::kOptimal) break;
    best = solution.primal;
    const double level = solution.primal[t];
    const int first = static_cast<int>(demands.size());
    int newly = 0;
    for (std::size_t r = 0; r < row_edge.size(); ++r) {
      const int e = row_edge[r];
      if (fixed[e] >= 0.0) continue;
      if (std::abs(solution.dual[first + r]) > 1e-9) {
        fixed[e] = level;
        ++newly;
      }
    }
    if (newly == 0) {
      // Degenerate dual: settle every edge that sits at the level.
      for (int e : row_edge) {
        if (fixed[e] >= 0.0) continue;
        double load = 0.0;
        for (int v : users[e]) load += solution.primal[v];
        if (load >= level * tree.capacity(e) * (1.0 - 1e-9)) {
          fixed[e] = level;
          ++newly;
        }
      }
    }
    if (newly == 0) break;
    open -= newly;
  }
  FlowSolution flow;
  for (std::size_t i = 0; i < columns.size() && !best.empty(); ++i) {
    if (best[i] <= 0.0) continue;
    columns[i].rate = best[i];
    flow.paths.push_back(columns[i]);
  }
  RefreshLoads(tree, flow);
  return flow;
}

}  // namespace

FlowSolution RouteDataLayer(const TreeGraph& tree, const CachingTraffic& traffic) {
  const PhiResult base = Phi(tree, traffic);
  if (base.forced_zero || base.infinite || !(base.value > 0.0)) return base.flow;
  std::size_t variables = 0;
  for (const auto& [key, rate] : traffic.entries()) variables += key.first.size();
  if (variables > kRefineVariableLimit) return base.flow;
  FlowSolution refined = Refine(tree, traffic, base.value);
  return refined.paths.empty() ? base.flow : refined;
}

bool DeliveryTrace::AllComplete() const {
  return std::all_of(messages.begin(), messages.end(),
                     [](const MessageTrace& m) { return m.complete; });
}

bool DeliveryTrace::AllConserved() const {
  return std::all_of(messages.begin(), messages.end(),
                     [](const MessageTrace& m) { return m.conserved; });
}

DeliveryTrace SimulateDelivery(const TreeGraph& tree, const CachingTraffic& traffic,
                               const SizeMap& sizes,
                               const std::function<void(const HopRecord&)>& observer) {
  DeliveryTrace trace;
  const PhiResult phi = Phi(tree, traffic);
  if (phi.forced_zero || !(phi.value > 0.0)) {
    throw std::runtime_error("traffic is infeasible at any positive rate");
  }
  trace.phi = phi.value;
  trace.flow = RouteDataLayer(tree, traffic);
  trace.edge_bits.assign(tree.num_edges(), 0);

  std::map<CachingTraffic::Key, std::vector<PathFlow>> by_request;
  for (const PathFlow& p : trace.flow.paths) by_request[{p.caches, p.dest}].push_back(p);

  int id = 0;
  for (const auto& [key, rate] : traffic.entries()) {
    const auto size_it = sizes.find(key);
    if (size_it == sizes.end()) throw std::invalid_argument("request without a message size");
    MessageTrace message;
    message.caches = key.first;
    message.dest = key.second;
    message.size = size_it->second;
    message.edge_bits.assign(tree.num_edges(), 0);
    MessageLedger received;
    received.id = id;
    received.total_size = message.size;
    if (CachingTraffic::TriviallyInfinite(key)) {
      // The destination caches the message itself.
      received.holdings[key.second] = {{0, message.size}};
      message.complete = received.Complete();
      trace.messages.push_back(std::move(message));
      ++id;
      continue;
    }
    const std::vector<PathFlow>& paths = by_request[key];
    std::vector<double> weights;
    for (const PathFlow& p : paths) weights.push_back(p.rate);
    const std::vector<std::int64_t> bits = ProportionalSplit(message.size, weights);
    std::int64_t offset = 0;
    for (std::size_t j = 0; j < paths.size(); ++j) {
      if (bits[j] == 0) continue;
      MessageLedger part = ConcentratedLedger(id, message.size, paths[j].source, offset, bits[j]);
      offset += bits[j];
      const std::vector<int> vertices = tree.LeafPathVertices(paths[j].source, message.dest);
      const std::vector<int> edges = tree.LeafPath(paths[j].source, message.dest);
      for (std::size_t h = 0; h + 1 < vertices.size(); ++h) {
        const int to = vertices[h + 1];
        const std::vector<int> receivers =
            tree.IsLeaf(to) ? std::vector<int>{tree.NodeOfLeaf(to)} : tree.NodesUnder(to);
        const int senders = static_cast<int>(part.holdings.size());
        part = RedistributeHop(part, receivers);
        message.conserved = message.conserved && part.TotalHeld() == bits[j] &&
                            FullyDistributed(part, receivers);
        message.edge_bits[edges[h]] += bits[j];
        trace.edge_bits[edges[h]] += bits[j];
        ++trace.hops;
        if (observer) {
          observer({edges[h], senders, static_cast<int>(receivers.size()), bits[j]});
        }
      }
      for (auto& [node, ranges] : part.holdings) {
        auto& target = received.holdings[node];
        target.insert(target.end(), ranges.begin(), ranges.end());
      }
      message.parts.push_back({key.first, paths[j].source, message.dest, static_cast<double>(bits[j])});
    }
    message.complete = received.holdings.size() == 1 && received.holdings.count(message.dest) &&
                       received.Complete();
    if (message.size == 0) message.complete = true;
    trace.messages.push_back(std::move(message));
    ++id;
  }
  return trace;
}

}  // namespace cachecap
