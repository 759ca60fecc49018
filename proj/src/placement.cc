#include "cachecap/placement.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace cachecap {

double Distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double NodePlacement::side() const { return std::sqrt(static_cast<double>(n)); }

NodePlacement GeneratePlacement(int n, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("placement needs n >= 1");
  NodePlacement placement;
  placement.n = n;
  placement.seed = seed;
  placement.coords.reserve(n);
  std::mt19937_64 rng(seed);
  const double side = placement.side();
  std::uniform_real_distribution<double> uniform(0.0, side);
  for (int i = 0; i < n; ++i) {
    const double x = uniform(rng);
    const double y = uniform(rng);
    placement.coords.push_back({x, y});
  }
  return placement;
}

NodePlacement MakePlacement(std::vector<Point> coords, std::uint64_t seed) {
  if (coords.empty()) throw std::invalid_argument("placement needs n >= 1");
  NodePlacement placement;
  placement.n = static_cast<int>(coords.size());
  placement.seed = seed;
  placement.coords = std::move(coords);
  const double side = placement.side();
  for (const Point& p : placement.coords) {
    if (!(p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side)) {
      throw std::invalid_argument("coordinate outside [0, sqrt(n)]^2");
    }
  }
  std::vector<int> order(placement.n);
  std::iota(order.begin(), order.end(), 0);
  const auto& c = placement.coords;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return c[a].x != c[b].x ? c[a].x < c[b].x : c[a].y < c[b].y;
  });
  for (int i = 1; i < placement.n; ++i) {
    if (c[order[i]].x == c[order[i - 1]].x &&
        c[order[i]].y == c[order[i - 1]].y) {
      throw std::invalid_argument("coincident nodes " +
                                  std::to_string(order[i - 1]) + " and " +
                                  std::to_string(order[i]));
    }
  }
  return placement;
}

NodePlacement GridPlacement(int n) {
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (n <= 0 || k * k != n) {
    throw std::invalid_argument("grid placement needs a perfect square n");
  }
  std::vector<Point> coords;
  coords.reserve(n);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) coords.push_back({i + 0.5, j + 0.5});
  }
  return MakePlacement(std::move(coords));
}

int ComputeL(int n) {
  if (n <= 0) throw std::invalid_argument("ComputeL needs n >= 1");
  if (n < 2) return 0;
  const double lg = std::log2(static_cast<double>(n));
  const double value = 0.5 * lg * (1.0 - 1.0 / std::sqrt(lg));
  return std::max(0, static_cast<int>(std::floor(value)));
}

DyadicIndex DyadicIndex::Parent() const {
  if (level == 0) throw std::invalid_argument("level-0 cell has no parent");
  return MakeDyadicIndex(level - 1, row() / 2, col() / 2);
}

bool DyadicIndex::Contains(const DyadicIndex& other) const {
  if (other.level < level) return false;
  const int shift = other.level - level;
  return (other.row() >> shift) == row() && (other.col() >> shift) == col();
}

DyadicIndex MakeDyadicIndex(int level, int row, int col) {
  return {level, row * (1 << level) + col + 1};
}

DyadicIndex CellOfPoint(const Point& p, double side, int level) {
  if (level < 0 || level > 30) throw std::invalid_argument("bad dyadic level");
  const int k = 1 << level;
  auto slot = [&](double v) {
    const int s = static_cast<int>(std::floor(v * k / side));
    return std::clamp(s, 0, k - 1);
  };
  return MakeDyadicIndex(level, slot(p.y), slot(p.x));
}

DyadicIndex DyadicCell(const NodePlacement& placement, int node, int level) {
  if (node < 0 || node >= placement.n) {
    throw std::out_of_range("invalid node id " + std::to_string(node));
  }
  return CellOfPoint(placement.coords[node], placement.side(), level);
}

std::vector<int> CellCounts(const NodePlacement& placement, int level) {
  std::vector<int> counts(std::size_t{1} << (2 * level), 0);
  for (int v = 0; v < placement.n; ++v) {
    ++counts[DyadicCell(placement, v, level).cell - 1];
  }
  return counts;
}

std::vector<int> NodesInCell(const NodePlacement& placement,
                             const DyadicIndex& index) {
  std::vector<int> nodes;
  for (int v = 0; v < placement.n; ++v) {
    if (DyadicCell(placement, v, index.level) == index) nodes.push_back(v);
  }
  return nodes;
}

CellBox CellGeometry(double side, const DyadicIndex& index) {
  const double w = side / index.side_count();
  return {index.col() * w, index.row() * w, w};
}

namespace {

bool MinDistanceOk(const NodePlacement& placement) {
  const double threshold = 1.0 / placement.n;
  const auto& c = placement.coords;
  std::vector<int> order(placement.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return c[a].x < c[b].x; });
  for (int i = 0; i < placement.n; ++i) {
    for (int j = i + 1; j < placement.n; ++j) {
      if (c[order[j]].x - c[order[i]].x > threshold) break;
      if (Distance(c[order[i]], c[order[j]]) <= threshold) return false;
    }
  }
  return true;
}

}  // namespace

RegularityReport CheckRegularity(const NodePlacement& placement) {
  RegularityReport report;
  const int n = placement.n;
  report.min_distance_ok = MinDistanceOk(placement);

  if (n >= 2) {
    const double lg = std::log2(static_cast<double>(n));

    report.unit_cell_level = static_cast<int>(std::floor(0.5 * lg));
    for (int count : CellCounts(placement, report.unit_cell_level)) {
      if (count > lg) report.unit_cell_max_ok = false;
    }

    const double ratio = n / (2.0 * lg);
    if (ratio >= 1.0) {
      report.logn_cell_level =
          static_cast<int>(std::floor(0.5 * std::log2(ratio)));
      for (int count : CellCounts(placement, report.logn_cell_level)) {
        if (count < 1) report.logn_cell_min_ok = false;
      }
    }

    const double top = 0.5 * lg * (1.0 - std::pow(lg, -5.0 / 6.0));
    report.proportional_max_level = std::max(0, static_cast<int>(std::floor(top)));
    for (int level = 1; level <= report.proportional_max_level; ++level) {
      const double lo = std::pow(4.0, -level - 1) * n;
      const double hi = std::pow(4.0, -level + 1) * n;
      for (int count : CellCounts(placement, level)) {
        if (count < lo || count > hi) report.proportional_ok = false;
      }
    }
  }
  report.overall = report.min_distance_ok && report.unit_cell_max_ok &&
                   report.logn_cell_min_ok && report.proportional_ok;
  return report;
}

}  // namespace cachecap
