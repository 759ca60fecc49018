// Random node placements on the square A(n) = [0, sqrt(n)]^2 and the dyadic
// decomposition of that square into 4^level subsquares.

#ifndef CACHECAP_PLACEMENT_H_
#define CACHECAP_PLACEMENT_H_

#include <cstdint>
#include <vector>

namespace cachecap {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double Distance(const Point& a, const Point& b);

// n wireless nodes on [0, sqrt(n)]^2. Node ids are positions in `coords`.
struct NodePlacement {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<Point> coords;

  double side() const;
  double distance(int u, int v) const { return Distance(coords[u], coords[v]); }
};

// Samples n points independently and uniformly. Deterministic in `seed`.
NodePlacement GeneratePlacement(int n, std::uint64_t seed);

// Wraps explicit coordinates after validating the NodePlacement invariants
// (range, count, no coincident points). Throws std::invalid_argument.
NodePlacement MakePlacement(std::vector<Point> coords, std::uint64_t seed = 0);

// The perfect unit grid: node (i, j) sits at (i + 1/2, j + 1/2). n must be a
// perfect square.
NodePlacement GridPlacement(int n);

// max(0, floor(log2(n) / 2 * (1 - log2(n)^(-1/2)))), the deepest internal
// level of the tree graph.
int ComputeL(int n);

// Cell (1-based) of a dyadic level. Cells are numbered row-major starting at
// the bottom-left corner: cell = row * 2^level + col + 1.
struct DyadicIndex {
  int level = 0;
  int cell = 1;

  int side_count() const { return 1 << level; }
  int row() const { return (cell - 1) / side_count(); }
  int col() const { return (cell - 1) % side_count(); }
  // Enclosing cell one level up. Requires level >= 1.
  DyadicIndex Parent() const;
  // True if `other` is geometrically contained in this cell.
  bool Contains(const DyadicIndex& other) const;

  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

DyadicIndex MakeDyadicIndex(int level, int row, int col);

// Half-open boxes [x0, x1) x [y0, y1), with the last row and column closed.
DyadicIndex CellOfPoint(const Point& p, double side, int level);

DyadicIndex DyadicCell(const NodePlacement& placement, int node, int level);

// Node counts per cell, indexed by cell - 1.
std::vector<int> CellCounts(const NodePlacement& placement, int level);

// Nodes of V_{level,cell} in increasing id order.
std::vector<int> NodesInCell(const NodePlacement& placement,
                             const DyadicIndex& index);

// Lower-left corner and side length of a cell.
struct CellBox {
  double x0, y0, width;
  Point center() const { return {x0 + width / 2, y0 + width / 2}; }
};
CellBox CellGeometry(double side, const DyadicIndex& index);

// The four placement regularity conditions, evaluated with log2 and with the
// condition levels rounded down.
struct RegularityReport {
  bool min_distance_ok = true;     // r_{u,v} > 1/n for all pairs
  bool unit_cell_max_ok = true;    // <= log n nodes per area-1 cell
  bool logn_cell_min_ok = true;    // >= 1 node per area-(2 log n) cell
  bool proportional_ok = true;     // |V_{l,i}| in [4^{-l-1} n, 4^{-l+1} n]
  bool overall = true;

  // Levels actually tested; -1 when the condition was vacuous.
  int unit_cell_level = -1;
  int logn_cell_level = -1;
  int proportional_max_level = 0;
};

RegularityReport CheckRegularity(const NodePlacement& placement);

}  // namespace cachecap

#endif  // CACHECAP_PLACEMENT_H_
