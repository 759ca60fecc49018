#include "cachecap/lpcore.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cachecap/maxflow.h"

namespace cachecap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Demand {
  CacheSet caches;
  int dest;
  double rate;
};

// Splits traffic into the entries a program has to serve.
std::vector<Demand> Classify(const CachingTraffic& traffic, PhiResult& result) {
  std::vector<Demand> demands;
  for (const auto& [key, rate] : traffic.entries()) {
    if (key.first.empty()) {
      result.forced_zero = true;
    } else if (CachingTraffic::TriviallyInfinite(key)) {
      ++result.trivially_infinite;
    } else {
      demands.push_back({key.first, key.second, rate});
    }
  }
  return demands;
}

void RequireOptimal(const LPSolution& solution, const char* what) {
  if (solution.status != LPStatus::kOptimal) {
    throw std::runtime_error(std::string(what) + ": solver returned " +
                             ToString(solution.status));
  }
}

// Capacity rows for every edge some variable's path uses.
void AddCapacityRows(LPInstance& lp, const std::vector<std::vector<int>>& users,
                     const std::vector<double>& capacity) {
  for (std::size_t e = 0; e < users.size(); ++e) {
    if (users[e].empty()) continue;
    std::vector<std::pair<int, double>> terms;
    terms.reserve(users[e].size());
    for (int var : users[e]) terms.emplace_back(var, 1.0);
    lp.AddRow(std::move(terms), RowSense::kLessEqual, capacity[e], "cap" + std::to_string(e));
  }
}

PhiResult PhiByProgram(const TreeGraph& tree, const std::vector<Demand>& demands,
                       PhiResult result) {
  LPInstance lp;
  const int phi = lp.AddVariable(1.0, "phi");
  std::vector<PathFlow> columns;
  std::vector<std::vector<int>> users(tree.num_edges());
  for (const Demand& d : demands) {
    std::vector<std::pair<int, double>> row{{phi, d.rate}};
    for (int u : d.caches) {
      const int var = lp.AddVariable(0.0);
      columns.push_back({d.caches, u, d.dest, 0.0});
      row.emplace_back(var, -1.0);
      for (int e : tree.LeafPath(u, d.dest)) users[e].push_back(var);
    }
    lp.AddRow(std::move(row), RowSense::kLessEqual, 0.0);
  }
  AddCapacityRows(lp, users, tree.capacities());
  result.lp = SolveLP(lp);
  RequireOptimal(result.lp, "phi");
  result.value = result.lp.primal[phi];
  result.method = "lp";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const double rate = result.lp.primal[i + 1];
    if (rate <= 0.0) continue;
    columns[i].rate = rate;
    result.flow.paths.push_back(columns[i]);
  }
  RefreshLoads(tree, result.flow);
  return result;
}

// Splits a single-commodity tree flow into leaf-to-leaf paths.
std::vector<PathFlow> Decompose(const TreeGraph& tree, const CacheSet& caches,
                                const SingleSourceFlow& routed) {
  struct Arc {
    int head;
    double left;
  };
  const int vertices = tree.num_vertices();
  std::vector<std::vector<Arc>> out(vertices);
  double scale = 1.0;
  for (int e = 0; e < tree.num_edges(); ++e) {
    const double f = routed.edge_flow[e];
    if (f > 0) out[tree.EdgeChild(e)].push_back({tree.EdgeParent(e), f});
    if (f < 0) out[tree.EdgeParent(e)].push_back({tree.EdgeChild(e), -f});
    scale = std::max(scale, std::abs(f));
  }
  const double eps = 1e-12 * scale;
  std::vector<double> sink_left = routed.delivered;
  std::vector<std::size_t> cursor(vertices, 0);
  std::map<std::pair<int, int>, double> merged;
  for (int u : caches) {
    double supply = routed.source_out[u];
    while (supply > eps) {
      std::vector<Arc*> path;
      int v = tree.LeafVertex(u);
      double amount = supply;
      bool reached = false;
      while (true) {
        if (v != tree.LeafVertex(u) && tree.IsLeaf(v)) {
          amount = std::min(amount, sink_left[tree.NodeOfLeaf(v)]);
          reached = amount > eps;
          break;
        }
        auto& arcs = out[v];
        while (cursor[v] < arcs.size() && arcs[cursor[v]].left <= eps) ++cursor[v];
        if (cursor[v] == arcs.size()) break;
        Arc& arc = arcs[cursor[v]];
        path.push_back(&arc);
        amount = std::min(amount, arc.left);
        v = arc.head;
      }
      if (!reached) break;
      for (Arc* arc : path) arc->left -= amount;
      const int w = tree.NodeOfLeaf(v);
      sink_left[w] -= amount;
      supply -= amount;
      merged[{u, w}] += amount;
    }
  }
  std::vector<PathFlow> paths;
  for (const auto& [key, rate] : merged) paths.push_back({caches, key.first, key.second, rate});
  return paths;
}

PhiResult PhiBySingleSource(const TreeGraph& tree, const std::vector<Demand>& demands,
                            PhiResult result) {
  const CacheSet& caches = demands.front().caches;
  std::vector<double> weight(tree.n(), 0.0);
  for (const Demand& d : demands) {
    if (d.caches != caches) throw std::invalid_argument("max-flow route needs one cache set");
    weight[d.dest] += d.rate;
  }
  const RatioCut cut = SingleSourceRatioCut(tree, caches, weight);
  const SingleSourceFlow routed = RouteSingleSource(tree, caches, weight, cut.ratio);
  result.method = "maxflow";
  result.flow.paths = Decompose(tree, caches, routed);
  RefreshLoads(tree, result.flow);
  std::vector<double> got(tree.n(), 0.0);
  for (const PathFlow& p : result.flow.paths) got[p.dest] += p.rate;
  double value = kInf;
  for (int w = 0; w < tree.n(); ++w) {
    if (weight[w] > 0) value = std::min(value, got[w] / weight[w]);
  }
  result.value = value;
  return result;
}

}  // namespace

PhiResult Phi(const TreeGraph& tree, const CachingTraffic& traffic, PhiMethod method) {
  PhiResult result;
  const std::vector<Demand> demands = Classify(traffic, result);
  if (result.forced_zero) {
    result.method = "none";
    result.value = 0.0;
    return result;
  }
  if (demands.empty()) {
    result.method = "none";
    result.infinite = true;
    result.value = kInf;
    return result;
  }
  bool single = true;
  for (const Demand& d : demands) single = single && d.caches == demands.front().caches;
  if (method == PhiMethod::kMaxFlow && !single) {
    throw std::invalid_argument("max-flow route needs one cache set");
  }
  if (method == PhiMethod::kMaxFlow || (method == PhiMethod::kAuto && single)) {
    return PhiBySingleSource(tree, demands, std::move(result));
  }
  return PhiByProgram(tree, demands, std::move(result));
}

PhiResult PhiNearestCache(const TreeGraph& tree, const NodePlacement& placement,
                          const CachingTraffic& traffic) {
  if (placement.n != tree.n()) throw std::invalid_argument("placement does not match tree");
  PhiResult result;
  const std::vector<Demand> demands = Classify(traffic, result);
  result.method = "fixed-paths";
  if (result.forced_zero) return result;
  if (demands.empty()) {
    result.infinite = true;
    result.value = kInf;
    return result;
  }
  std::vector<double> load(tree.num_edges(), 0.0);
  std::vector<int> chosen;
  for (const Demand& d : demands) {
    int best = d.caches.front();
    for (int u : d.caches) {
      if (placement.distance(u, d.dest) < placement.distance(best, d.dest)) best = u;
    }
    chosen.push_back(best);
    for (int e : tree.LeafPath(best, d.dest)) load[e] += d.rate;
  }
  double value = kInf;
  for (int e = 0; e < tree.num_edges(); ++e) {
    if (load[e] > 0) value = std::min(value, tree.capacity(e) / load[e]);
  }
  result.value = value;
  for (std::size_t k = 0; k < demands.size(); ++k) {
    result.flow.paths.push_back({demands[k].caches, chosen[k], demands[k].dest,
                                 value * demands[k].rate});
  }
  RefreshLoads(tree, result.flow);
  return result;
}

UnicastTraffic DirectedUnicast(const DirectedCacheGraph& graph,
                               const CachingTraffic& traffic) {
  UnicastTraffic out;
  out.domain = UnicastTraffic::Domain::kCacheNode;
  for (const auto& [key, rate] : traffic.entries()) {
    if (key.first.empty() || CachingTraffic::TriviallyInfinite(key)) continue;
    const int node = graph.FindCacheNode(key.first);
    if (node < 0) throw std::invalid_argument("cache set missing from the augmented graph");
    out.Add(node, key.second, rate);
  }
  return out;
}

DirectedFlowResult ConcurrentFlowDirected(const DirectedCacheGraph& graph,
                                          const UnicastTraffic& unicast) {
  if (unicast.domain != UnicastTraffic::Domain::kCacheNode) {
    throw std::invalid_argument("directed traffic must originate at cache super-nodes");
  }
  const TreeGraph& tree = graph.tree();
  DirectedFlowResult result;
  LPInstance lp;
  const int phi = lp.AddVariable(1.0, "phi");
  std::vector<PathFlow> columns;
  std::vector<std::vector<int>> users(graph.num_core_edges());
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> demand_rows;
  for (const auto& [key, rate] : unicast.entries) {
    const auto [source, dest] = key;
    if (source < 0 || source >= graph.num_cache_nodes()) {
      throw std::invalid_argument("unknown cache super-node");
    }
    if (dest < 0 || dest >= tree.n()) throw std::invalid_argument("destination is not a leaf");
    const CacheSet& members = graph.cache_members(source);
    if (std::binary_search(members.begin(), members.end(), dest)) continue;
    std::vector<std::pair<int, double>> row{{phi, rate}};
    for (int u : members) {
      const int var = lp.AddVariable(0.0);
      columns.push_back({members, u, dest, 0.0});
      row.emplace_back(var, -1.0);
      for (int e : graph.CorePath(u, dest)) users[e].push_back(var);
    }
    pairs.push_back(key);
    demand_rows.push_back(lp.AddRow(std::move(row), RowSense::kLessEqual, 0.0));
  }
  result.duals.edge_price.assign(graph.num_core_edges(), 0.0);
  if (pairs.empty()) {
    result.infinite = true;
    result.phi_tilde = kInf;
    return result;
  }
  std::vector<double> capacity(graph.num_core_edges());
  for (int id = 0; id < graph.num_core_edges(); ++id) capacity[id] = tree.capacity(id / 2);
  const int first_capacity_row = lp.num_rows();
  AddCapacityRows(lp, users, capacity);
  result.lp = SolveLP(lp);
  RequireOptimal(result.lp, "directed concurrent flow");
  result.phi_tilde = result.lp.primal[phi];

  int row = first_capacity_row;
  for (int id = 0; id < graph.num_core_edges(); ++id) {
    if (users[id].empty()) continue;
    result.duals.edge_price[id] = std::max(0.0, result.lp.dual[row++]);
    result.duals.objective += capacity[id] * result.duals.edge_price[id];
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    result.duals.demand_price[pairs[k]] = std::max(0.0, result.lp.dual[demand_rows[k]]);
    double shortest = kInf;
    for (int u : graph.cache_members(pairs[k].first)) {
      double length = 0.0;
      for (int e : graph.CorePath(u, pairs[k].second)) length += result.duals.edge_price[e];
      shortest = std::min(shortest, length);
    }
    result.duals.distance[pairs[k]] = shortest;
  }
  result.flow.directed = true;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const double rate = result.lp.primal[i + 1];
    if (rate <= 0.0) continue;
    columns[i].rate = rate;
    result.flow.paths.push_back(columns[i]);
  }
  RefreshLoads(tree, result.flow);
  return result;
}

SumRateResult MaxSumRateDirected(const DirectedCacheGraph& graph,
                                 const std::vector<std::pair<int, int>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("sum rate needs at least one pair");
  const TreeGraph& tree = graph.tree();
  SumRateResult result;
  std::vector<std::pair<int, int>> unique = pairs;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  LPInstance lp;
  std::vector<PathFlow> columns;
  std::vector<std::vector<int>> users(graph.num_core_edges());
  for (const auto& [source, dest] : unique) {
    if (source < 0 || source >= graph.num_cache_nodes() || dest < 0 || dest >= tree.n()) {
      throw std::invalid_argument("pair outside the augmented graph");
    }
    const CacheSet& members = graph.cache_members(source);
    if (std::binary_search(members.begin(), members.end(), dest)) {
      result.infinite = true;
      result.sigma = kInf;
      return result;
    }
    for (int u : members) {
      const int var = lp.AddVariable(1.0);
      columns.push_back({members, u, dest, 0.0});
      for (int e : graph.CorePath(u, dest)) users[e].push_back(var);
    }
  }
  std::vector<double> capacity(graph.num_core_edges());
  for (int id = 0; id < graph.num_core_edges(); ++id) capacity[id] = tree.capacity(id / 2);
  AddCapacityRows(lp, users, capacity);
  result.lp = SolveLP(lp);
  RequireOptimal(result.lp, "directed sum rate");
  result.sigma = result.lp.objective;
  result.flow.directed = true;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (result.lp.primal[i] <= 0.0) continue;
    columns[i].rate = result.lp.primal[i];
    result.flow.paths.push_back(columns[i]);
  }
  RefreshLoads(tree, result.flow);
  return result;
}

SumRateResult MaxSumRateTree(const TreeGraph& tree,
                             const std::vector<std::pair<int, int>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("sum rate needs at least one pair");
  std::vector<std::pair<int, int>> unique = pairs;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  SumRateResult result;
  LPInstance lp;
  std::vector<std::vector<int>> users(tree.num_edges());
  for (const auto& [u, w] : unique) {
    if (u == w) throw std::invalid_argument("pair with identical endpoints");
    const int var = lp.AddVariable(1.0);
    for (int e : tree.LeafPath(u, w)) users[e].push_back(var);
  }
  AddCapacityRows(lp, users, tree.capacities());
  result.lp = SolveLP(lp);
  RequireOptimal(result.lp, "tree sum rate");
  result.sigma = result.lp.objective;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    if (result.lp.primal[i] <= 0.0) continue;
    result.flow.paths.push_back({{unique[i].first}, unique[i].first, unique[i].second,
                                 result.lp.primal[i]});
  }
  RefreshLoads(tree, result.flow);
  return result;
}

}  // namespace cachecap
