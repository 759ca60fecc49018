#include "cachecap/traffic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cachecap/flow.h"

namespace cachecap {

CacheSet CanonicalCacheSet(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void CachingTraffic::Add(std::vector<int> caches, int dest, double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("traffic rates must be finite and nonnegative");
  }
  CacheSet set = CanonicalCacheSet(std::move(caches));
  for (int u : set) {
    if (u < 0 || (n_ > 0 && u >= n_)) throw std::invalid_argument("cache id out of range");
  }
  if (dest < 0 || (n_ > 0 && dest >= n_)) {
    throw std::invalid_argument("destination id out of range");
  }
  if (rate == 0.0) return;
  entries_[{std::move(set), dest}] += rate;
}

double CachingTraffic::Total() const {
  double total = 0.0;
  for (const auto& [key, rate] : entries_) total += rate;
  return total;
}

double CachingTraffic::Rate(const std::vector<int>& caches, int dest) const {
  const auto it = entries_.find({CanonicalCacheSet(caches), dest});
  return it == entries_.end() ? 0.0 : it->second;
}

std::vector<TrafficEntry> CachingTraffic::List() const {
  std::vector<TrafficEntry> list;
  list.reserve(entries_.size());
  for (const auto& [key, rate] : entries_) list.push_back({key.first, key.second, rate});
  return list;
}

std::vector<CacheSet> CachingTraffic::CacheSets() const {
  std::vector<CacheSet> sets;
  for (const auto& [key, rate] : entries_) {
    if (!key.first.empty()) sets.push_back(key.first);
  }
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

bool CachingTraffic::TriviallyInfinite(const Key& key) {
  return std::binary_search(key.first.begin(), key.first.end(), key.second);
}

CachingTraffic Normalize(const CachingTraffic& traffic) {
  const double total = traffic.Total();
  if (!(total > 0.0)) {
    throw std::domain_error("cannot normalize all-zero traffic");
  }
  CachingTraffic out(traffic.n());
  for (const auto& [key, rate] : traffic.entries()) {
    out.Add(key.first, key.second, rate / total);
  }
  return out;
}

void UnicastTraffic::Add(int source, int dest, double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("unicast rates must be nonnegative");
  if (rate == 0.0) return;
  entries[{source, dest}] += rate;
}

double UnicastTraffic::Total() const {
  double total = 0.0;
  for (const auto& [key, rate] : entries) total += rate;
  return total;
}

UnicastTraffic CachingToUnicast(const FlowSolution& flow) {
  UnicastTraffic out;
  for (const PathFlow& p : flow.paths) out.Add(p.source, p.dest, p.rate);
  return out;
}

int NearestSharedCache(const NodePlacement& placement) {
  if (ComputeL(placement.n) < 1) {
    throw std::invalid_argument("nearest scenario needs L(n) >= 1");
  }
  const std::vector<int> shared = NodesInCell(placement, {2, 3});
  if (shared.empty()) throw std::invalid_argument("cell (2,3) is empty");
  const Point target = CellGeometry(placement.side(), {2, 1}).center();
  int best = shared.front();
  double best_distance = std::numeric_limits<double>::infinity();
  for (int v : shared) {
    const double d = Distance(placement.coords[v], target);
    if (d < best_distance) {
      best_distance = d;
      best = v;
    }
  }
  return best;
}

CachingTraffic ScenarioNearest(const NodePlacement& placement) {
  const int shared = NearestSharedCache(placement);
  const std::vector<int> dests = NodesInCell(placement, {2, 1});
  const std::vector<int> own = NodesInCell(placement, {2, 16});
  if (dests.empty()) throw std::invalid_argument("cell (2,1) is empty");
  if (own.empty()) throw std::invalid_argument("cell (2,16) is empty");
  CachingTraffic traffic(placement.n);
  const std::size_t count = std::min(dests.size(), own.size());
  for (std::size_t i = 0; i < count; ++i) {
    traffic.Add({shared, own[i]}, dests[i], 1.0);
  }
  return traffic;
}

CachingTraffic ScenarioComplete(const NodePlacement& placement, double beta,
                                std::uint64_t seed) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");
  const int n = placement.n;
  const int count = std::clamp(
      static_cast<int>(std::lround(std::pow(static_cast<double>(n), beta))), 1, n);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates so the choice depends only on the seed.
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  std::vector<int> caches(ids.begin(), ids.begin() + count);
  CachingTraffic traffic(n);
  for (int v = 0; v < n; ++v) traffic.Add(caches, v, 1.0);
  return traffic;
}

}  // namespace cachecap
