// Slow, independent reference computations used as test oracles.

#ifndef CACHECAP_TESTS_ORACLES_H_
#define CACHECAP_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cachecap/lp.h"
#include "cachecap/traffic.h"
#include "cachecap/treegraph.h"

namespace oracle {

using cachecap::CachingTraffic;
using cachecap::LPInstance;
using cachecap::RowSense;
using cachecap::TreeGraph;

// Best basic feasible point of a bounded LP, by trying every choice of
// num_vars tight constraints (rows or x_j = 0). nullopt when infeasible.
inline std::optional<double> VertexEnumeration(const LPInstance& lp) {
  const int nv = lp.num_vars();
  struct Hyperplane {
    Eigen::VectorXd a;
    double b;
  };
  std::vector<Hyperplane> planes;
  for (const auto& row : lp.rows) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(nv);
    for (const auto& [j, c] : row.terms) a[j] += c;
    planes.push_back({a, row.rhs});
  }
  for (int j = 0; j < nv; ++j) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(nv);
    a[j] = 1.0;
    planes.push_back({a, 0.0});
  }
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < nv; ++j) {
      if (x[j] < -1e-9) return false;
    }
    for (const auto& row : lp.rows) {
      double lhs = 0.0;
      for (const auto& [j, c] : row.terms) lhs += c * x[j];
      const double slack = 1e-9 * std::max(1.0, std::abs(row.rhs));
      if (row.sense == RowSense::kLessEqual && lhs > row.rhs + slack) return false;
      if (row.sense == RowSense::kGreaterEqual && lhs < row.rhs - slack) return false;
      if (row.sense == RowSense::kEqual && std::abs(lhs - row.rhs) > slack) return false;
    }
    return true;
  };
  std::optional<double> best;
  const int m = static_cast<int>(planes.size());
  // Iterate over all nv-subsets of the m hyperplanes.
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + std::min(nv, m), true);
  if (nv > m) return best;
  do {
    Eigen::MatrixXd a(nv, nv);
    Eigen::VectorXd b(nv);
    int r = 0;
    for (int i = 0; i < m; ++i) {
      if (!mask[i]) continue;
      a.row(r) = planes[i].a.transpose();
      b[r] = planes[i].b;
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < nv) continue;
    const Eigen::VectorXd x = lu.solve(b);
    if (!feasible(x)) continue;
    double value = 0.0;
    for (int j = 0; j < nv; ++j) value += lp.objective[j] * x[j];
    if (!best || (lp.maximize ? value > *best : value < *best)) best = value;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

// Leaf-to-leaf path by walking parent pointers; edges sorted.
inline std::vector<int> PathEdges(const TreeGraph& tree, int u_node, int w_node) {
  int a = tree.LeafVertex(u_node);
  int b = tree.LeafVertex(w_node);
  std::vector<int> edges;
  while (a != b) {
    if (tree.vertex(a).level >= tree.vertex(b).level) {
      edges.push_back(a - 1);
      a = tree.vertex(a).parent;
    } else {
      edges.push_back(b - 1);
      b = tree.vertex(b).parent;
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

// min over S with positive demand of capacity(S, S^c) / demand(S, S^c), by
// plain enumeration of all vertex subsets. +inf when no S has demand.
inline double PlainRhoHat(const TreeGraph& tree, const CachingTraffic& traffic) {
  const int nv = tree.num_vertices();
  double best = std::numeric_limits<double>::infinity();
  for (long long mask = 0; mask < (1LL << nv); ++mask) {
    auto in = [&](int v) { return ((mask >> v) & 1LL) != 0; };
    double demand = 0.0;
    for (const auto& [key, rate] : traffic.entries()) {
      bool all = !key.first.empty();
      for (int u : key.first) all = all && in(tree.LeafVertex(u));
      if (all && !in(tree.LeafVertex(key.second))) demand += rate;
    }
    if (demand <= 0.0) continue;
    double capacity = 0.0;
    for (int e = 0; e < tree.num_edges(); ++e) {
      if (in(e + 1) != in(tree.vertex(e + 1).parent)) capacity += tree.capacity(e);
    }
    best = std::min(best, capacity / demand);
  }
  return best;
}

// phi by the path program, assembled here and solved in exact arithmetic.
// Requires no trivially infinite or empty-cache entries.
inline double ExactPhi(const TreeGraph& tree, const CachingTraffic& traffic) {
  LPInstance lp;
  lp.maximize = true;
  const int phi = lp.AddVariable(1.0);
  std::map<int, std::vector<std::pair<int, double>>> edge_terms;
  for (const auto& [key, rate] : traffic.entries()) {
    std::vector<std::pair<int, double>> demand{{phi, rate}};
    for (int u : key.first) {
      const int var = lp.AddVariable(0.0);
      demand.emplace_back(var, -1.0);
      for (int e : PathEdges(tree, u, key.second)) edge_terms[e].emplace_back(var, 1.0);
    }
    lp.AddRow(demand, RowSense::kLessEqual, 0.0);
  }
  for (const auto& [e, terms] : edge_terms) lp.AddRow(terms, RowSense::kLessEqual, tree.capacity(e));
  return cachecap::SolveLPExact(lp).objective;
}

}  // namespace oracle

#endif  // CACHECAP_TESTS_ORACLES_H_
