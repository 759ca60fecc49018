#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cachecap/flow.h"
#include "cachecap/harness.h"
#include "cachecap/scheme.h"

namespace cachecap {
namespace {

TreeGraph Star4() { return TreeGraph::FromLeafCells(4, 4.0, {1, 1, 1, 1}); }

std::vector<std::int64_t> SortedAmounts(const MessageLedger& ledger) {
  std::vector<std::int64_t> amounts;
  for (const auto& [node, ranges] : ledger.holdings) amounts.push_back(ledger.Held(node));
  std::sort(amounts.begin(), amounts.end());
  return amounts;
}

TEST(MessageLedger, Bookkeeping) {
  MessageLedger a = ConcentratedLedger(0, 10, 3, 2, 5);
  EXPECT_EQ(a.Held(3), 5);
  EXPECT_EQ(a.Held(4), 0);
  EXPECT_TRUE(a.Disjoint());
  EXPECT_FALSE(a.Complete());
  a.holdings[1] = {{0, 2}};
  a.holdings[2] = {{7, 3}};
  EXPECT_TRUE(a.Complete());
  a.holdings[2] = {{6, 4}};
  EXPECT_FALSE(a.Disjoint());
  EXPECT_THROW(ConcentratedLedger(0, 10, 0, 8, 3), std::invalid_argument);
}

TEST(RedistributeHop, ThreeSendersToNineReceivers) {
  MessageLedger ledger;
  ledger.total_size = 90;
  ledger.holdings[0] = {{0, 30}};
  ledger.holdings[1] = {{30, 30}};
  ledger.holdings[2] = {{60, 30}};
  std::vector<int> receivers{3, 4, 5, 6, 7, 8, 9, 10, 11};
  const MessageLedger next = RedistributeHop(ledger, receivers);
  for (int r : receivers) EXPECT_EQ(next.Held(r), 10);
  EXPECT_TRUE(next.Complete());
  EXPECT_TRUE(FullyDistributed(next, receivers));
  EXPECT_THROW(RedistributeHop(ledger, {}), std::invalid_argument);
}

TEST(RedistributeHop, UnevenRemaindersStayBalanced) {
  MessageLedger ledger;
  ledger.total_size = 23;
  ledger.holdings[0] = {{0, 8}};
  ledger.holdings[1] = {{8, 8}};
  ledger.holdings[2] = {{16, 7}};
  const std::vector<int> receivers{5, 6, 7};
  const MessageLedger next = RedistributeHop(ledger, receivers);
  EXPECT_TRUE(FullyDistributed(next, receivers));
  EXPECT_EQ(next.TotalHeld(), 23);
  EXPECT_TRUE(next.Complete());
}

TEST(RedistributeHop, SingleForward) {
  const MessageLedger a = ConcentratedLedger(1, 40, 2, 0, 40);
  const MessageLedger b = RedistributeHop(a, {7});
  EXPECT_EQ(b.Held(7), 40);
  EXPECT_EQ(b.holdings.size(), 1u);
  EXPECT_TRUE(b.Complete());
}

TEST(CooperateHop, RoundTripRestoresAmounts) {
  const NodePlacement p = GridPlacement(64);
  const DyadicIndex child = MakeDyadicIndex(2, 1, 2);
  const DyadicIndex parent = child.Parent();
  const std::vector<int> members = NodesInCell(p, child);
  ASSERT_EQ(members.size(), 4u);
  MessageLedger ledger;
  ledger.total_size = 102;
  std::int64_t offset = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::int64_t share = i < 2 ? 26 : 25;
    ledger.holdings[members[i]] = {{offset, share}};
    offset += share;
  }
  ASSERT_TRUE(FullyDistributed(ledger, members));
  const MessageLedger up = CooperateHop(ledger, child, parent, p);
  EXPECT_TRUE(FullyDistributed(up, NodesInCell(p, parent)));
  const MessageLedger back = CooperateHop(up, parent, child, p);
  EXPECT_EQ(SortedAmounts(back), SortedAmounts(ledger));
  EXPECT_TRUE(FullyDistributed(back, members));
  EXPECT_TRUE(back.Complete());
}

TEST(CooperateHop, RejectsBadHops) {
  const NodePlacement p = GridPlacement(64);
  const DyadicIndex cell = MakeDyadicIndex(2, 0, 0);
  const std::vector<int> members = NodesInCell(p, cell);
  MessageLedger spread;
  spread.total_size = 8;
  for (std::size_t i = 0; i < members.size(); ++i) {
    spread.holdings[members[i]] = {{static_cast<std::int64_t>(2 * i), 2}};
  }
  // Not adjacent: two levels apart, and a level-1 cell that does not contain it.
  EXPECT_THROW(CooperateHop(spread, cell, MakeDyadicIndex(0, 0, 0), p), std::invalid_argument);
  EXPECT_THROW(CooperateHop(spread, cell, MakeDyadicIndex(1, 1, 1), p), std::invalid_argument);
  // Not spread over the sender cell.
  const MessageLedger lumped = ConcentratedLedger(0, 8, members[0], 0, 8);
  EXPECT_THROW(CooperateHop(lumped, cell, cell.Parent(), p), std::invalid_argument);
  // Empty destination cell.
  std::vector<Point> pts;
  for (int i = 0; i < 16; ++i) pts.push_back({0.1 + 0.1 * i, 0.2 + 0.05 * i});
  const NodePlacement corner = MakePlacement(pts);
  const DyadicIndex top = MakeDyadicIndex(0, 0, 0);
  MessageLedger all;
  all.total_size = 16;
  for (int i = 0; i < 16; ++i) all.holdings[i] = {{i, 1}};
  EXPECT_THROW(CooperateHop(all, top, MakeDyadicIndex(1, 1, 1), corner), std::invalid_argument);
}

TEST(ProportionalSplit, LargestRemainder) {
  EXPECT_EQ(ProportionalSplit(90, {1.0, 1.0}), (std::vector<std::int64_t>{45, 45}));
  EXPECT_EQ(ProportionalSplit(10, {1.0, 1.0, 1.0}), (std::vector<std::int64_t>{4, 3, 3}));
  EXPECT_EQ(ProportionalSplit(7, {0.0, 0.0}), (std::vector<std::int64_t>{7, 0}));
  const std::vector<std::int64_t> parts = ProportionalSplit(1000, {0.2, 0.5, 0.3});
  EXPECT_EQ(parts, (std::vector<std::int64_t>{200, 500, 300}));
}

TEST(RouteDataLayer, SymmetricCachesShareEvenly) {
  const TreeGraph tree = Star4();
  CachingTraffic t(4);
  t.Add({0, 1}, 3, 1.0);
  const FlowSolution flow = RouteDataLayer(tree, t);
  ASSERT_EQ(flow.paths.size(), 2u);
  EXPECT_NEAR(flow.paths[0].rate, flow.paths[1].rate, 1e-8);
  EXPECT_NEAR(flow.paths[0].rate + flow.paths[1].rate, 1.0, 1e-8);
}

TEST(SimulateDelivery, SingleCacheCarriesWholeMessageOnEveryEdge) {
  const TreeGraph tree = TreeGraph::Build(GeneratePlacement(64, 3), 4.0);
  CachingTraffic t(64);
  t.Add({4}, 20, 1.0);
  const DeliveryTrace trace = SimulateDelivery(tree, t, {{{{4}, 20}, 100}});
  ASSERT_TRUE(trace.AllComplete());
  ASSERT_TRUE(trace.AllConserved());
  const std::vector<int> path = tree.LeafPath(4, 20);
  for (int e = 0; e < tree.num_edges(); ++e) {
    const bool on = std::find(path.begin(), path.end(), e) != path.end();
    EXPECT_EQ(trace.edge_bits[e], on ? 100 : 0) << e;
  }
  EXPECT_EQ(trace.hops, static_cast<int>(path.size()));
}

TEST(SimulateDelivery, TwoSymmetricCachesSplitTheMessage) {
  const TreeGraph tree = Star4();
  CachingTraffic t(4);
  t.Add({0, 1}, 3, 1.0);
  std::vector<HopRecord> hops;
  const DeliveryTrace trace =
      SimulateDelivery(tree, t, {{{{0, 1}, 3}, 90}}, [&](const HopRecord& h) { hops.push_back(h); });
  ASSERT_EQ(trace.messages.size(), 1u);
  const MessageTrace& m = trace.messages[0];
  ASSERT_EQ(m.parts.size(), 2u);
  EXPECT_EQ(m.parts[0].rate, 45.0);
  EXPECT_EQ(m.parts[1].rate, 45.0);
  EXPECT_TRUE(m.complete);
  EXPECT_EQ(trace.edge_bits[tree.EdgeAbove(tree.LeafVertex(3))], 90);
  EXPECT_EQ(trace.edge_bits[tree.EdgeAbove(tree.LeafVertex(0))], 45);
  EXPECT_EQ(hops.size(), 4u);
  // Up into the root spreads over all four nodes.
  EXPECT_EQ(hops[0].receivers, 4);
}

TEST(SimulateDelivery, CompleteScenarioEndToEnd) {
  const NodePlacement p = GeneratePlacement(64, 11);
  const TreeGraph tree = TreeGraph::Build(p, 4.0);
  const CachingTraffic t = ScenarioComplete(p, 0.5, 11);
  SizeMap sizes;
  for (const auto& [key, rate] : t.entries()) sizes[key] = 1000;
  const DeliveryTrace trace = SimulateDelivery(tree, t, sizes);
  EXPECT_TRUE(trace.AllComplete());
  EXPECT_TRUE(trace.AllConserved());
  EXPECT_EQ(trace.messages.size(), 64u);
}

TEST(SimulateDelivery, EdgeBitsFollowTheFlow) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    const TreeGraph tree = TreeGraph::Build(GeneratePlacement(16, seed), 4.0);
    const CachingTraffic t = RandomTraffic(16, rng);
    SizeMap sizes;
    for (const auto& [key, rate] : t.entries()) sizes[key] = 100000;
    const DeliveryTrace trace = SimulateDelivery(tree, t, sizes);
    EXPECT_TRUE(trace.AllComplete()) << seed;
    for (const MessageTrace& m : trace.messages) {
      if (CachingTraffic::TriviallyInfinite({m.caches, m.dest})) continue;
      double total = 0.0;
      for (const PathFlow& f : trace.flow.paths) {
        if (f.caches == m.caches && f.dest == m.dest) total += f.rate;
      }
      for (const PathFlow& f : trace.flow.paths) {
        if (f.caches != m.caches || f.dest != m.dest) continue;
        const double share = m.size * f.rate / total;
        for (int e : tree.LeafPath(f.source, f.dest)) {
          EXPECT_GE(static_cast<double>(m.edge_bits[e]), share - 1.0 - 1e-6) << seed;
        }
      }
      std::int64_t carried = 0;
      for (const PathFlow& part : m.parts) carried += static_cast<std::int64_t>(part.rate);
      EXPECT_EQ(carried, m.size);
    }
  }
}

TEST(SimulateDelivery, Errors) {
  const TreeGraph tree = Star4();
  CachingTraffic zero(4);
  zero.Add({}, 1, 1.0);
  EXPECT_THROW(SimulateDelivery(tree, zero, {{{{}, 1}, 10}}), std::runtime_error);
  CachingTraffic t(4);
  t.Add({0}, 1, 1.0);
  EXPECT_THROW(SimulateDelivery(tree, t, {}), std::invalid_argument);
}

TEST(SimulateDelivery, SelfServedAndEmptyMessages) {
  const TreeGraph tree = Star4();
  CachingTraffic t(4);
  t.Add({1, 2}, 2, 1.0);
  t.Add({0}, 3, 1.0);
  const DeliveryTrace trace = SimulateDelivery(tree, t, {{{{1, 2}, 2}, 50}, {{{0}, 3}, 0}});
  EXPECT_TRUE(trace.AllComplete());
  for (std::int64_t b : trace.edge_bits) EXPECT_EQ(b, 0);
}

}  // namespace
}  // namespace cachecap
