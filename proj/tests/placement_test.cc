#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "cachecap/placement.h"

namespace cachecap {
namespace {

TEST(GeneratePlacement, SingleNodeLandsInUnitSquare) {
  const NodePlacement p = GeneratePlacement(1, 99);
  ASSERT_EQ(p.coords.size(), 1u);
  EXPECT_DOUBLE_EQ(p.side(), 1.0);
  EXPECT_GE(p.coords[0].x, 0.0);
  EXPECT_LE(p.coords[0].x, 1.0);
  EXPECT_GE(p.coords[0].y, 0.0);
  EXPECT_LE(p.coords[0].y, 1.0);
}

TEST(GeneratePlacement, DeterministicInSeed) {
  const NodePlacement a = GeneratePlacement(64, 7);
  const NodePlacement b = GeneratePlacement(64, 7);
  const NodePlacement c = GeneratePlacement(64, 8);
  ASSERT_EQ(a.coords.size(), 64u);
  bool differs = false;
  for (int i = 0; i < 64; ++i) {
    EXPECT_EQ(a.coords[i].x, b.coords[i].x);
    EXPECT_EQ(a.coords[i].y, b.coords[i].y);
    differs = differs || a.coords[i].x != c.coords[i].x;
  }
  EXPECT_TRUE(differs);
}

TEST(GeneratePlacement, RejectsZeroNodes) {
  EXPECT_THROW(GeneratePlacement(0, 1), std::invalid_argument);
}

TEST(GeneratePlacement, CoordinatesInsideSquare) {
  for (int n : {4, 16, 256}) {
    const NodePlacement p = GeneratePlacement(n, 3);
    const double side = std::sqrt(static_cast<double>(n));
    for (const Point& q : p.coords) {
      EXPECT_GE(q.x, 0.0);
      EXPECT_LE(q.x, side);
      EXPECT_GE(q.y, 0.0);
      EXPECT_LE(q.y, side);
    }
  }
}

TEST(MakePlacement, RejectsBadInput) {
  EXPECT_THROW(MakePlacement({{0.5, 0.5}, {0.5, 0.5}}), std::invalid_argument);
  EXPECT_THROW(MakePlacement({{3.0, 0.5}}), std::invalid_argument);
}

TEST(ComputeL, FormulaValues) {
  EXPECT_EQ(ComputeL(4), 0);
  EXPECT_EQ(ComputeL(16), 1);
  EXPECT_EQ(ComputeL(64), 1);
  EXPECT_EQ(ComputeL(256), 2);
  EXPECT_EQ(ComputeL(1024), 3);
  EXPECT_EQ(ComputeL(4096), 4);
}

TEST(ComputeL, MatchesDirectEvaluation) {
  for (int n = 2; n <= 1 << 16; n *= 2) {
    const double lg = std::log2(static_cast<double>(n));
    const int expected = std::max(0, static_cast<int>(std::floor(0.5 * lg * (1.0 - 1.0 / std::sqrt(lg)))));
    EXPECT_EQ(ComputeL(n), expected) << n;
  }
}

TEST(DyadicCell, OriginIsFirstCell) {
  const NodePlacement p = MakePlacement({{0.0, 0.0}, {3.0, 3.5}, {1.0, 2.0}, {2.5, 0.1},
                                         {0.2, 3.9}, {3.9, 0.2}, {1.9, 1.9}, {2.1, 2.1},
                                         {0.7, 0.8}, {1.5, 2.5}, {3.2, 1.1}, {2.2, 3.3},
                                         {0.4, 1.6}, {1.2, 0.3}, {2.8, 2.6}, {3.6, 3.0}});
  for (int level = 0; level <= 3; ++level) {
    EXPECT_EQ(DyadicCell(p, 0, level).cell, 1);
  }
  for (int node = 0; node < p.n; ++node) EXPECT_EQ(DyadicCell(p, node, 0).cell, 1);
}

TEST(DyadicCell, BoxArithmetic) {
  // Level 1 on side 8 has 4-wide cells; (5, 5) is in row 1, col 1.
  const DyadicIndex idx = CellOfPoint({5.0, 5.0}, 8.0, 1);
  EXPECT_EQ(idx.level, 1);
  EXPECT_EQ(idx.row(), 1);
  EXPECT_EQ(idx.col(), 1);
  EXPECT_EQ(idx.cell, 4);
  const CellBox box = CellGeometry(8.0, idx);
  EXPECT_DOUBLE_EQ(box.x0, 4.0);
  EXPECT_DOUBLE_EQ(box.y0, 4.0);
  EXPECT_DOUBLE_EQ(box.width, 4.0);
}

TEST(DyadicCell, BoundaryTieBreaking) {
  // Interior edges belong to the upper cell; the outer edge stays in the last.
  EXPECT_EQ(CellOfPoint({4.0, 0.0}, 8.0, 1).col(), 1);
  EXPECT_EQ(CellOfPoint({8.0, 8.0}, 8.0, 1).cell, 4);
  EXPECT_EQ(CellOfPoint({8.0, 8.0}, 8.0, 3).cell, 64);
}

TEST(DyadicCell, NestingAcrossLevels) {
  const NodePlacement p = GeneratePlacement(256, 11);
  for (int node = 0; node < p.n; ++node) {
    for (int level = 1; level <= 4; ++level) {
      const DyadicIndex fine = DyadicCell(p, node, level);
      const DyadicIndex coarse = DyadicCell(p, node, level - 1);
      EXPECT_EQ(fine.Parent(), coarse);
      EXPECT_TRUE(coarse.Contains(fine));
    }
  }
}

TEST(CellCounts, PartitionTheNodes) {
  const NodePlacement p = GeneratePlacement(1024, 5);
  for (int level = 0; level <= 5; ++level) {
    int total = 0;
    for (int c : CellCounts(p, level)) total += c;
    EXPECT_EQ(total, 1024);
    int listed = 0;
    for (int cell = 1; cell <= (1 << (2 * level)); ++cell) {
      listed += static_cast<int>(NodesInCell(p, {level, cell}).size());
    }
    EXPECT_EQ(listed, 1024);
  }
}

TEST(CheckRegularity, CoincidentPointsFailMinimumDistance) {
  NodePlacement p = GridPlacement(64);
  p.coords[1] = {p.coords[0].x + 1.0 / (64.0 * 64.0), p.coords[0].y};
  const RegularityReport r = CheckRegularity(p);
  EXPECT_FALSE(r.min_distance_ok);
  EXPECT_FALSE(r.overall);
}

TEST(CheckRegularity, UnitGridIsProportional) {
  const NodePlacement p = GridPlacement(64);
  for (int level = 0; level <= 3; ++level) {
    for (int c : CellCounts(p, level)) EXPECT_EQ(c, 64 >> (2 * level));
  }
  const RegularityReport r = CheckRegularity(p);
  EXPECT_TRUE(r.proportional_ok);
  EXPECT_TRUE(r.min_distance_ok);
  EXPECT_TRUE(r.overall);
}

TEST(CheckRegularity, OverallIsConjunction) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const RegularityReport r = CheckRegularity(GeneratePlacement(256, seed));
    EXPECT_EQ(r.overall, r.min_distance_ok && r.unit_cell_max_ok && r.logn_cell_min_ok &&
                             r.proportional_ok);
  }
}

TEST(CheckRegularity, Deterministic) {
  const RegularityReport a = CheckRegularity(GeneratePlacement(256, 4));
  const RegularityReport b = CheckRegularity(GeneratePlacement(256, 4));
  EXPECT_EQ(a.overall, b.overall);
  EXPECT_EQ(a.proportional_ok, b.proportional_ok);
  EXPECT_EQ(a.unit_cell_max_ok, b.unit_cell_max_ok);
}

// At n = 256 the binding condition is the proportional one at level 3, where
// 64 cells share 256 nodes and each must be nonempty. The probability that no
// cell is empty follows from inclusion-exclusion; the other conditions fail
// with probability below about 0.01. The Monte-Carlo frequency must agree.
TEST(CheckRegularity, MonteCarloFrequencyAtN256) {
  const RegularityReport probe = CheckRegularity(GeneratePlacement(256, 1));
  ASSERT_EQ(probe.proportional_max_level, 3);

  double no_empty = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double term = std::exp(std::lgamma(65.0) - std::lgamma(k + 1.0) - std::lgamma(65.0 - k) +
                                 256.0 * std::log1p(-k / 64.0));
    no_empty += (k % 2 == 0 ? 1.0 : -1.0) * term;
  }
  ASSERT_GT(no_empty, 0.2);
  ASSERT_LT(no_empty, 0.4);

  const int trials = 200;
  int regular = 0;
  int proportional = 0;
  for (int seed = 1; seed <= trials; ++seed) {
    const RegularityReport r = CheckRegularity(GeneratePlacement(256, seed));
    regular += r.overall ? 1 : 0;
    proportional += r.proportional_ok ? 1 : 0;
  }
  const double fraction = static_cast<double>(regular) / trials;
  const double sd = std::sqrt(no_empty * (1.0 - no_empty) / trials);
  RecordProperty("regular_fraction", std::to_string(fraction));
  RecordProperty("no_empty_cell_probability", std::to_string(no_empty));
  EXPECT_NEAR(fraction, no_empty, 4.0 * sd + 0.01);
  EXPECT_LE(regular, proportional);
}

}  // namespace
}  // namespace cachecap
