#include "cachecap/cutbounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "cachecap/maxflow.h"

namespace cachecap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool AtLeast(double a, double b, double tolerance) {
  if (std::isinf(b) && b > 0) return std::isinf(a) && a > 0;
  return a >= b - tolerance * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

double CutSpec::ratio() const {
  return demand_across > 0.0 ? capacity_across / demand_across : kInf;
}

std::vector<int> CutSpec::Members() const {
  std::vector<int> members;
  for (std::size_t v = 0; v < in_s.size(); ++v) {
    if (in_s[v]) members.push_back(static_cast<int>(v));
  }
  return members;
}

CutSpec EvaluateCut(const TreeGraph& tree, const CachingTraffic& traffic,
                    std::vector<char> in_s) {
  if (static_cast<int>(in_s.size()) != tree.num_vertices()) {
    throw std::invalid_argument("cut mask must cover every vertex");
  }
  CutSpec cut;
  cut.in_s = std::move(in_s);
  for (int e = 0; e < tree.num_edges(); ++e) {
    if (cut.in_s[tree.EdgeChild(e)] != cut.in_s[tree.EdgeParent(e)]) {
      cut.capacity_across += tree.capacity(e);
    }
  }
  for (const auto& [key, rate] : traffic.entries()) {
    if (cut.in_s[tree.LeafVertex(key.second)]) continue;
    bool inside = true;
    for (int u : key.first) inside = inside && cut.in_s[tree.LeafVertex(u)];
    if (inside) cut.demand_across += rate;
  }
  return cut;
}

namespace {

bool HasEmptyCacheSet(const CachingTraffic& traffic) {
  for (const auto& [key, rate] : traffic.entries()) {
    if (key.first.empty()) return true;
  }
  return false;
}

// An empty cache set lies inside every S, so S = {} already has zero capacity
// and positive demand.
RhoHat ZeroCut(const TreeGraph& tree, const CachingTraffic& traffic) {
  RhoHat result;
  result.witness = EvaluateCut(tree, traffic, std::vector<char>(tree.num_vertices(), 0));
  result.value = 0.0;
  return result;
}

}  // namespace

RhoHat RhoHatBruteForce(const TreeGraph& tree, const CachingTraffic& traffic) {
  const int vertices = tree.num_vertices();
  if (vertices > kMaxBruteForceVertices) {
    throw std::length_error("brute-force rho-hat limited to " +
                            std::to_string(kMaxBruteForceVertices) +
                            " vertices; use the tree search");
  }
  if (HasEmptyCacheSet(traffic)) return ZeroCut(tree, traffic);

  struct Entry {
    int size;
    int dest;
    double rate;
    int inside = 0;
  };
  std::vector<Entry> entries;
  std::vector<std::vector<int>> member_of(vertices);
  std::vector<std::vector<int>> dest_of(vertices);
  for (const auto& [key, rate] : traffic.entries()) {
    if (CachingTraffic::TriviallyInfinite(key)) continue;
    const int k = static_cast<int>(entries.size());
    entries.push_back({static_cast<int>(key.first.size()), tree.LeafVertex(key.second), rate});
    for (int u : key.first) member_of[tree.LeafVertex(u)].push_back(k);
    dest_of[tree.LeafVertex(key.second)].push_back(k);
  }
  std::vector<std::vector<std::pair<int, double>>> incident(vertices);
  for (int e = 0; e < tree.num_edges(); ++e) {
    incident[tree.EdgeChild(e)].emplace_back(tree.EdgeParent(e), tree.capacity(e));
    incident[tree.EdgeParent(e)].emplace_back(tree.EdgeChild(e), tree.capacity(e));
  }

  RhoHat best;
  best.value = kInf;
  best.infinite = true;
  best.witness = EvaluateCut(tree, traffic, std::vector<char>(vertices, 0));
  std::vector<char> in_s(vertices, 0);
  double capacity = 0.0;
  double demand = 0.0;
  int active = 0;
  auto activate = [&](Entry& entry, int sign) {
    demand += sign * entry.rate;
    active += sign;
  };
  const std::uint64_t total = std::uint64_t{1} << vertices;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int v = __builtin_ctzll(step);
    for (const auto& [x, c] : incident[v]) capacity += in_s[x] == in_s[v] ? c : -c;
    in_s[v] ^= 1;
    const bool entering = in_s[v];
    for (int k : member_of[v]) {
      Entry& entry = entries[k];
      if (entering) {
        ++entry.inside;
        if (entry.inside == entry.size && !in_s[entry.dest]) activate(entry, +1);
      } else {
        if (entry.inside == entry.size && !in_s[entry.dest]) activate(entry, -1);
        --entry.inside;
      }
    }
    for (int k : dest_of[v]) {
      Entry& entry = entries[k];
      if (entry.inside == entry.size) activate(entry, entering ? -1 : +1);
    }
    if ((step & 4095) == 0) {
      // Drop accumulated rounding.
      const CutSpec exact = EvaluateCut(tree, traffic, in_s);
      capacity = exact.capacity_across;
      demand = exact.demand_across;
    }
    if (active == 0) continue;
    const double ratio = std::max(0.0, capacity) / demand;
    if (ratio <= best.value * (1.0 + 1e-9) + 1e-300 || best.infinite) {
      CutSpec exact = EvaluateCut(tree, traffic, in_s);
      if (best.infinite || exact.ratio() < best.value) {
        best.value = exact.ratio();
        best.infinite = false;
        best.witness = std::move(exact);
      }
    }
  }
  return best;
}

RhoHat RhoHatTree(const TreeGraph& tree, const CachingTraffic& traffic) {
  if (HasEmptyCacheSet(traffic)) return ZeroCut(tree, traffic);
  std::vector<CacheSet> sets;
  for (const auto& [key, rate] : traffic.entries()) {
    if (!CachingTraffic::TriviallyInfinite(key)) sets.push_back(key.first);
  }
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  const int count = static_cast<int>(sets.size());
  if (count > kMaxTreeSearchCacheSets) {
    throw std::length_error("tree search limited to " +
                            std::to_string(kMaxTreeSearchCacheSets) +
                            " distinct cache sets");
  }
  RhoHat best;
  best.value = kInf;
  best.infinite = true;
  best.witness = EvaluateCut(tree, traffic, std::vector<char>(tree.num_vertices(), 0));

  std::set<std::vector<int>> unions;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << count); ++mask) {
    std::vector<int> members;
    for (int k = 0; k < count; ++k) {
      if (mask >> k & 1) members.insert(members.end(), sets[k].begin(), sets[k].end());
    }
    unions.insert(CanonicalCacheSet(std::move(members)));
  }
  for (const std::vector<int>& sources : unions) {
    std::vector<double> weight(tree.n(), 0.0);
    for (const auto& [key, rate] : traffic.entries()) {
      if (CachingTraffic::TriviallyInfinite(key)) continue;
      if (std::includes(sources.begin(), sources.end(), key.first.begin(), key.first.end())) {
        weight[key.second] += rate;
      }
    }
    const RatioCut cut = SingleSourceRatioCut(tree, sources, weight);
    if (cut.infinite) continue;
    CutSpec exact = EvaluateCut(tree, traffic, cut.source_side);
    if (exact.demand_across > 0.0 && (best.infinite || exact.ratio() < best.value)) {
      best.value = exact.ratio();
      best.infinite = false;
      best.witness = std::move(exact);
    }
  }
  return best;
}

double LogFactor(int n) {
  return 1.0 + std::log(2.0) + 4.0 * std::log(static_cast<double>(n));
}

double B4(int n) { return 1.0 / (16.0 * LogFactor(n)); }

BottleneckSet BottleneckPairs(const DualSolution& duals, const UnicastTraffic& unicast,
                              int n) {
  const double n2 = static_cast<double>(n) * n;
  const double floor_rate = 1.0 / (2.0 * n2 * n2);
  struct Item {
    std::pair<int, int> pair;
    double distance;
    double rate;
  };
  std::vector<Item> items;
  double largest = 0.0;
  for (const auto& [pair, rate] : unicast.entries) {
    const auto it = duals.distance.find(pair);
    if (it == duals.distance.end()) throw std::logic_error("missing dual distance for a pair");
    items.push_back({pair, it->second, rate});
    largest = std::max(largest, it->second);
  }
  if (largest > n2 * (1.0 + 1e-9)) {
    throw std::logic_error("dual distance exceeds n^2");
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.distance > b.distance; });

  struct Bucket {
    double value;
    double rate;
    std::size_t end;  // one past the last item of the bucket
  };
  std::vector<Bucket> buckets;
  const double zero = 1e-12 * std::max(1.0, largest);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].distance <= zero) break;
    if (!buckets.empty() &&
        buckets.back().value - items[i].distance <= 1e-10 * std::max(1.0, buckets.back().value)) {
      buckets.back().rate += items[i].rate;
      buckets.back().end = i + 1;
    } else {
      buckets.push_back({items[i].distance, items[i].rate, i + 1});
    }
  }
  BottleneckSet result;
  result.buckets = static_cast<int>(buckets.size());
  if (result.buckets > n2) throw std::logic_error("more than n^2 distinct dual distances");
  const double factor = LogFactor(n);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < buckets.size(); ++k) {
    if (buckets[k].rate < floor_rate) continue;
    cumulative += buckets[k].rate;
    const double needed = 1.0 / (2.0 * cumulative * factor);
    if (buckets[k].value >= needed * (1.0 - 1e-12)) {
      result.chosen_bucket = static_cast<int>(k) + 1;
      result.threshold = buckets[k].value;
      result.cumulative = cumulative;
      for (std::size_t i = 0; i < buckets[k].end; ++i) {
        result.pairs.push_back(items[i].pair);
        result.demand += items[i].rate;
      }
      return result;
    }
  }
  throw std::logic_error("no dual bucket meets the distance bound");
}

Multicut TreeMulticut(const TreeGraph& tree, const std::vector<std::pair<int, int>>& pairs) {
  struct Job {
    std::vector<int> path;
    int depth;
    std::size_t order;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [u, w] = pairs[i];
    if (u == w) throw std::invalid_argument("pair with identical endpoints cannot be cut");
    const std::vector<int> vertices = tree.LeafPathVertices(u, w);
    int lca_depth = tree.depth() + 1;
    for (int v : vertices) lca_depth = std::min(lca_depth, tree.Depth(v));
    jobs.push_back({tree.LeafPath(u, w), lca_depth, i});
  }
  std::stable_sort(jobs.begin(), jobs.end(),
                   [](const Job& a, const Job& b) { return a.depth > b.depth; });

  Multicut cut;
  std::vector<double> residual = tree.capacities();
  std::vector<char> saturated(tree.num_edges(), 0);
  std::vector<int> added;
  for (const Job& job : jobs) {
    double push = kInf;
    for (int e : job.path) push = std::min(push, saturated[e] ? 0.0 : residual[e]);
    if (push <= 0.0) continue;
    cut.packed_flow += push;
    for (int e : job.path) {
      residual[e] -= push;
      if (residual[e] <= 1e-12 * tree.capacity(e)) {
        residual[e] = 0.0;
        saturated[e] = 1;
        added.push_back(e);
      }
    }
  }

  // Reverse delete, keeping every pair covered at least once.
  std::vector<std::vector<int>> pairs_on(tree.num_edges());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (int e : jobs[j].path) pairs_on[e].push_back(static_cast<int>(j));
  }
  std::vector<int> covered(jobs.size(), 0);
  std::vector<char> in_cut(tree.num_edges(), 0);
  for (int e : added) {
    in_cut[e] = 1;
    for (int j : pairs_on[e]) ++covered[j];
  }
  for (auto it = added.rbegin(); it != added.rend(); ++it) {
    const int e = *it;
    bool needed = false;
    for (int j : pairs_on[e]) needed = needed || covered[j] < 2;
    if (needed) continue;
    in_cut[e] = 0;
    for (int j : pairs_on[e]) --covered[j];
  }
  for (int e = 0; e < tree.num_edges(); ++e) {
    if (!in_cut[e]) continue;
    cut.edges.push_back(e);
    cut.cost += tree.capacity(e);
  }

  cut.component.assign(tree.num_vertices(), -1);
  for (int start = 0; start < tree.num_vertices(); ++start) {
    if (cut.component[start] >= 0) continue;
    std::vector<int> stack{start};
    cut.component[start] = cut.num_components;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      std::vector<int> next = tree.children(v);
      if (v != 0) next.push_back(tree.vertex(v).parent);
      for (int x : next) {
        const int e = tree.EdgeAbove(x == tree.vertex(v).parent ? v : x);
        if (in_cut[e] || cut.component[x] >= 0) continue;
        cut.component[x] = cut.num_components;
        stack.push_back(x);
      }
    }
    ++cut.num_components;
  }
  return cut;
}

bool SeparatesAll(const TreeGraph& tree, const Multicut& cut,
                  const std::vector<std::pair<int, int>>& pairs) {
  for (const auto& [u, w] : pairs) {
    if (cut.component[tree.LeafVertex(u)] == cut.component[tree.LeafVertex(w)]) return false;
  }
  return true;
}

bool SandwichReport::AllHold() const {
  return flow_le_cut && directed_half && bottleneck_bound && sum_rate_cut &&
         core_sum_rate && multicut_half && boundary_identity && component_demand_ok &&
         sandwich_ok;
}

SandwichReport Sandwich(const TreeGraph& tree, const CachingTraffic& traffic,
                        double tolerance) {
  // Requests served by their own cache cross no cut and need no flow.
  CachingTraffic served(traffic.n());
  for (const auto& [key, rate] : traffic.entries()) {
    if (key.first.empty()) throw std::invalid_argument("sandwich needs nonempty cache sets");
    if (!CachingTraffic::TriviallyInfinite(key)) served.Add(key.first, key.second, rate);
  }
  if (served.empty()) throw std::invalid_argument("sandwich needs a request outside its cache set");
  const CachingTraffic lambda = Normalize(served);
  SandwichReport report;
  report.n = tree.n();
  report.b4 = B4(tree.n());
  report.log_factor = LogFactor(tree.n());

  report.phi = Phi(tree, lambda).value;
  RhoHat rho;
  if (static_cast<int>(lambda.CacheSets().size()) <= kMaxTreeSearchCacheSets) {
    rho = RhoHatTree(tree, lambda);
    report.rhohat_method = "tree-search";
  } else {
    rho = RhoHatBruteForce(tree, lambda);
    report.rhohat_method = "exact";
  }
  report.rhohat = rho.value;
  report.witness = rho.witness;

  const DirectedCacheGraph graph = DirectedCacheGraph::Build(tree, lambda.CacheSets());
  const UnicastTraffic unicast = DirectedUnicast(graph, lambda);
  const DirectedFlowResult directed = ConcurrentFlowDirected(graph, unicast);
  report.phi_tilde = directed.phi_tilde;
  report.dual_objective = directed.duals.objective;
  report.bottleneck = BottleneckPairs(directed.duals, unicast, tree.n());
  report.sigma_tilde = MaxSumRateDirected(graph, report.bottleneck.pairs).sigma;

  for (const auto& [source, dest] : report.bottleneck.pairs) {
    for (int u : graph.cache_members(source)) report.induced_pairs.emplace_back(u, dest);
  }
  std::sort(report.induced_pairs.begin(), report.induced_pairs.end());
  report.induced_pairs.erase(
      std::unique(report.induced_pairs.begin(), report.induced_pairs.end()),
      report.induced_pairs.end());
  report.sigma = MaxSumRateTree(tree, report.induced_pairs).sigma;
  report.multicut = TreeMulticut(tree, report.induced_pairs);

  for (int c = 0; c < report.multicut.num_components; ++c) {
    std::vector<char> inside(tree.num_vertices(), 0);
    std::vector<char> outside(tree.num_vertices(), 0);
    for (int v = 0; v < tree.num_vertices(); ++v) {
      inside[v] = report.multicut.component[v] == c;
      outside[v] = !inside[v];
    }
    report.boundary_sum += EvaluateCut(tree, lambda, inside).capacity_across;
    report.component_demand += EvaluateCut(tree, lambda, outside).demand_across;
  }

  const double lambda_f = report.bottleneck.demand;
  report.flow_le_cut = AtLeast(report.rhohat, report.phi, tolerance);
  report.directed_half = AtLeast(report.phi, 0.5 * report.phi_tilde, tolerance);
  report.bottleneck_bound = AtLeast(
      report.phi_tilde, report.sigma_tilde / (2.0 * report.log_factor * lambda_f), tolerance);
  report.sum_rate_cut = AtLeast(report.sigma_tilde / lambda_f, 0.25 * report.rhohat, tolerance);
  report.core_sum_rate = AtLeast(report.sigma_tilde, report.sigma, tolerance);
  report.multicut_half = AtLeast(report.sigma, 0.5 * report.multicut.cost, tolerance);
  report.boundary_identity =
      std::abs(report.multicut.cost - 0.5 * report.boundary_sum) <=
      tolerance * std::max(1.0, report.multicut.cost);
  report.component_demand_ok = AtLeast(report.component_demand, lambda_f, tolerance);
  report.sandwich_ok = report.flow_le_cut && AtLeast(report.phi, report.b4 * report.rhohat, tolerance);
  return report;
}

}  // namespace cachecap
