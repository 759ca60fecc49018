#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <gtest/gtest.h>

#include "cachecap/placement.h"
#include "cachecap/treegraph.h"
#include "oracles.h"

namespace cachecap {
namespace {

TreeGraph Star4() { return TreeGraph::FromLeafCells(4, 4.0, {1, 1, 1, 1}); }

TEST(EdgeCapacity, FormulaValues) {
  EXPECT_DOUBLE_EQ(EdgeCapacity(2, 64, 4.0), 1.0);  // leaf level for L = 1
  EXPECT_DOUBLE_EQ(EdgeCapacity(1, 64, 4.0), 4.0);
  EXPECT_NEAR(EdgeCapacity(1, 64, 2.5), 8.0, 1e-12);
  EXPECT_DOUBLE_EQ(EdgeCapacity(1, 64, 10.0), 4.0);
  EXPECT_THROW(EdgeCapacity(0, 64, 4.0), std::out_of_range);
  EXPECT_THROW(EdgeCapacity(3, 64, 4.0), std::out_of_range);
}

TEST(TreeGraph, RejectsSmallAlpha) {
  EXPECT_THROW(TreeGraph::Build(GeneratePlacement(16, 1), 2.0), std::invalid_argument);
  EXPECT_THROW(TreeGraph::Build(GeneratePlacement(16, 1), 1.5), std::invalid_argument);
}

TEST(TreeGraph, StarForFourNodes) {
  const TreeGraph t = TreeGraph::Build(GeneratePlacement(4, 2), 4.0);
  EXPECT_EQ(t.depth(), 0);
  EXPECT_EQ(t.num_vertices(), 5);
  EXPECT_EQ(t.num_edges(), 4);
  for (int e = 0; e < 4; ++e) EXPECT_DOUBLE_EQ(t.capacity(e), 1.0);
  EXPECT_EQ(t.children(0).size(), 4u);
}

TEST(TreeGraph, VertexCountFormula) {
  for (int n : {4, 16, 64, 256, 1024, 4096}) {
    const TreeGraph t = TreeGraph::Build(GeneratePlacement(n, 1), 4.0);
    const int l = ComputeL(n);
    long long internal = 0;
    for (int k = 0; k <= l; ++k) internal += 1LL << (2 * k);
    EXPECT_EQ(t.num_vertices(), n + internal) << n;
    EXPECT_LE(t.num_vertices(), 2 * n) << n;
  }
  EXPECT_EQ(TreeGraph::Build(GeneratePlacement(64, 3), 4.0).num_vertices(), 69);
}

TEST(TreeGraph, StructuralInvariants) {
  const NodePlacement p = GeneratePlacement(1024, 9);
  const TreeGraph t = TreeGraph::Build(p, 3.0);
  int roots = 0;
  for (int v = 0; v < t.num_vertices(); ++v) {
    const TreeVertex& x = t.vertex(v);
    if (x.parent < 0) {
      ++roots;
      EXPECT_EQ(x.level, 0);
      continue;
    }
    EXPECT_EQ(t.vertex(x.parent).level, x.level - 1);
    EXPECT_GE(t.capacity(t.EdgeAbove(v)), 1.0);
    if (!t.IsLeaf(v) && x.level < t.depth()) EXPECT_EQ(t.children(v).size(), 4u);
    if (t.IsLeaf(v)) {
      EXPECT_EQ(x.level, t.depth() + 1);
      // The leaf hangs under the level-L cell that contains its node.
      EXPECT_EQ(t.vertex(x.parent).cell, DyadicCell(p, x.node, t.depth()).cell);
      EXPECT_EQ(t.LeafVertex(x.node), v);
    }
  }
  EXPECT_EQ(roots, 1);
  for (int e = 0; e < t.num_edges(); ++e) {
    const int level = t.EdgeLevel(e);
    if (level >= 2) EXPECT_GE(t.capacity(t.EdgeAbove(t.EdgeParent(e))), t.capacity(e));
  }
}

TEST(TreeGraph, InternalVertexIds) {
  const TreeGraph t = TreeGraph::Build(GeneratePlacement(4096, 1), 4.0);
  for (int level = 0; level <= t.depth(); ++level) {
    for (int cell = 1; cell <= (1 << (2 * level)); cell += 7) {
      const int v = t.InternalVertex(level, cell);
      EXPECT_EQ(v, ((1 << (2 * level)) - 1) / 3 + cell - 1);
      EXPECT_EQ(t.vertex(v).level, level);
      EXPECT_EQ(t.vertex(v).cell, cell);
    }
  }
}

TEST(TreeGraph, TopologyIndependentOfAlpha) {
  const NodePlacement p = GeneratePlacement(256, 6);
  const TreeGraph a = TreeGraph::Build(p, 2.5);
  const TreeGraph b = TreeGraph::Build(p, 7.0);
  ASSERT_EQ(a.num_vertices(), b.num_vertices());
  for (int v = 0; v < a.num_vertices(); ++v) EXPECT_EQ(a.vertex(v).parent, b.vertex(v).parent);
}

TEST(UniquePath, Examples) {
  const NodePlacement p = GeneratePlacement(64, 4);
  const TreeGraph t = TreeGraph::Build(p, 4.0);
  EXPECT_TRUE(t.LeafPath(3, 3).empty());
  // Two nodes in the same level-1 cell share a parent.
  const std::vector<int> cell = NodesInCell(p, DyadicCell(p, 0, 1));
  ASSERT_GE(cell.size(), 2u);
  EXPECT_EQ(t.LeafPath(cell[0], cell[1]).size(), 2u);
  // Nodes in different level-1 cells meet at the root.
  int other = -1;
  for (int v = 0; v < 64; ++v) {
    if (DyadicCell(p, v, 1).cell != DyadicCell(p, 0, 1).cell) other = v;
  }
  ASSERT_GE(other, 0);
  EXPECT_EQ(t.LeafPath(0, other).size(), 4u);
  EXPECT_THROW(t.UniquePath(0, t.LeafVertex(1)), std::invalid_argument);
}

TEST(UniquePath, MatchesParentWalkAndReverses) {
  const TreeGraph t = TreeGraph::Build(GeneratePlacement(1024, 2), 4.0);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> node(0, 1023);
  for (int i = 0; i < 300; ++i) {
    const int u = node(rng);
    const int w = node(rng);
    std::vector<int> path = t.LeafPath(u, w);
    std::vector<int> back = t.LeafPath(w, u);
    std::reverse(back.begin(), back.end());
    EXPECT_EQ(path, back);
    // Simple and consecutive: each edge shares a vertex with the next.
    EXPECT_EQ(std::set<int>(path.begin(), path.end()).size(), path.size());
    const std::vector<int> vertices = t.LeafPathVertices(u, w);
    ASSERT_EQ(vertices.size(), path.size() + 1);
    EXPECT_EQ(vertices.front(), t.LeafVertex(u));
    EXPECT_EQ(vertices.back(), t.LeafVertex(w));
    for (std::size_t h = 0; h < path.size(); ++h) {
      const int e = path[h];
      const std::set<int> ends{t.EdgeChild(e), t.EdgeParent(e)};
      EXPECT_EQ(ends, (std::set<int>{vertices[h], vertices[h + 1]}));
    }
    std::sort(path.begin(), path.end());
    EXPECT_EQ(path, oracle::PathEdges(t, u, w));
  }
}

TEST(NodesUnder, CoversCell) {
  const NodePlacement p = GeneratePlacement(256, 8);
  const TreeGraph t = TreeGraph::Build(p, 4.0);
  for (int level = 0; level <= t.depth(); ++level) {
    for (int cell = 1; cell <= (1 << (2 * level)); ++cell) {
      EXPECT_EQ(t.NodesUnder(t.InternalVertex(level, cell)), NodesInCell(p, {level, cell}));
    }
  }
  EXPECT_EQ(t.NodesUnder(t.LeafVertex(17)), std::vector<int>{17});
}

TEST(DirectedCacheGraph, SingletonCache) {
  const TreeGraph t = Star4();
  const DirectedCacheGraph g = DirectedCacheGraph::Build(t, {{2}});
  EXPECT_EQ(g.num_cache_nodes(), 1);
  EXPECT_EQ(g.num_cache_edges(), 1);
  const std::vector<DirectedEdge> edges = g.CacheEdges();
  EXPECT_TRUE(edges[0].unbounded);
  EXPECT_EQ(edges[0].tail, g.CacheVertex(0));
  EXPECT_EQ(edges[0].head, t.LeafVertex(2));
}

TEST(DirectedCacheGraph, CountsOnStar) {
  const TreeGraph t = Star4();
  const DirectedCacheGraph g = DirectedCacheGraph::Build(t, {{0, 1}});
  EXPECT_EQ(g.num_core_edges(), 8);
  EXPECT_EQ(g.num_cache_nodes(), 1);
  EXPECT_EQ(g.num_cache_edges(), 2);
  for (int id = 0; id < g.num_core_edges(); ++id) {
    const DirectedEdge e = g.core_edge(id);
    EXPECT_DOUBLE_EQ(e.capacity, t.capacity(id / 2));
    EXPECT_FALSE(e.unbounded);
  }
  const DirectedEdge up = g.core_edge(DirectedCacheGraph::UpEdge(1));
  const DirectedEdge down = g.core_edge(DirectedCacheGraph::DownEdge(1));
  EXPECT_EQ(up.tail, down.head);
  EXPECT_EQ(up.head, down.tail);
}

TEST(DirectedCacheGraph, DeduplicatesAndValidates) {
  const TreeGraph t = Star4();
  const DirectedCacheGraph g = DirectedCacheGraph::Build(t, {{1}, {1}, {2, 0}, {0, 2}});
  EXPECT_EQ(g.num_cache_nodes(), 2);
  EXPECT_EQ(g.FindCacheNode({0, 2}), g.FindCacheNode({2, 0}));
  EXPECT_EQ(g.FindCacheNode({3}), -1);
  EXPECT_THROW(DirectedCacheGraph::Build(t, {{}}), std::invalid_argument);
  EXPECT_THROW(DirectedCacheGraph::Build(t, {{7}}), std::invalid_argument);
}

TEST(DirectedCacheGraph, CorePathDirections) {
  const TreeGraph t = TreeGraph::Build(GeneratePlacement(64, 2), 4.0);
  const DirectedCacheGraph g = DirectedCacheGraph::Build(t, {{0}});
  for (int w = 1; w < 64; ++w) {
    const std::vector<int> core = g.CorePath(0, w);
    const std::vector<int> undirected = t.LeafPath(0, w);
    ASSERT_EQ(core.size(), undirected.size());
    int tail = t.LeafVertex(0);
    for (std::size_t h = 0; h < core.size(); ++h) {
      EXPECT_EQ(core[h] / 2, undirected[h]);
      const DirectedEdge e = g.core_edge(core[h]);
      EXPECT_EQ(e.tail, tail);
      tail = e.head;
    }
    EXPECT_EQ(tail, t.LeafVertex(w));
  }
}

}  // namespace
}  // namespace cachecap
