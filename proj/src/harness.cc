#include "cachecap/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "cachecap/cutbounds.h"
#include "cachecap/lpcore.h"
#include "cachecap/scheme.h"

namespace cachecap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    part = Trim(part);
    if (!part.empty()) parts.push_back(part);
  }
  if (parts.empty()) throw std::invalid_argument("empty list");
  return parts;
}

template <typename T>
T ParseNumber(const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (!in || !in.eof()) throw std::invalid_argument("not a number: " + text);
  return value;
}

bool PowerOfFour(int n) {
  if (n < 1) return false;
  while (n % 4 == 0) n /= 4;
  return n == 1;
}

// Runs body(i) for i in [0, count) on a small pool; each index is handled by
// exactly one worker.
template <typename Body>
void ParallelFor(std::size_t count, Body body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::mt19937_64 InstanceRng(int n, std::uint64_t seed, int index, int stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

bool WithinRelative(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

const char* ToString(Scenario scenario) {
  return scenario == Scenario::kNearest ? "nearest" : "complete";
}

Scenario ParseScenario(const std::string& name) {
  if (name == "nearest") return Scenario::kNearest;
  if (name == "complete") return Scenario::kComplete;
  throw std::invalid_argument("unknown scenario " + name);
}

std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& part : SplitCommas(text)) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(ParseNumber<std::uint64_t>(part));
      continue;
    }
    const auto lo = ParseNumber<std::uint64_t>(Trim(part.substr(0, dots)));
    const auto hi = ParseNumber<std::uint64_t>(Trim(part.substr(dots + 2)));
    if (hi < lo) throw std::invalid_argument("descending seed range " + part);
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::vector<int> ParseIntList(const std::string& text) {
  std::vector<int> values;
  for (const std::string& part : SplitCommas(text)) values.push_back(ParseNumber<int>(part));
  return values;
}

std::vector<double> ParseDoubleList(const std::string& text) {
  std::vector<double> values;
  for (const std::string& part : SplitCommas(text)) values.push_back(ParseNumber<double>(part));
  return values;
}

ExponentFit FitExponent(const std::vector<int>& ns, const std::vector<double>& values) {
  if (ns.size() != values.size()) throw std::invalid_argument("size mismatch");
  ExponentFit fit;
  fit.points = static_cast<int>(ns.size());
  fit.distinct_n = static_cast<int>(std::set<int>(ns.begin(), ns.end()).size());
  if (fit.distinct_n < 3) throw std::invalid_argument("exponent fit needs at least 3 distinct n");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] <= 0 || !(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument("exponent fit needs positive finite values");
    }
    x.push_back(std::log(static_cast<double>(ns[i])));
    y.push_back(std::log(values[i]));
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.residuals.push_back(r);
    ssr += r * r;
  }
  const double dof = m - 2.0;
  boost::math::students_t dist(dof);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.half_width = t * std::sqrt(ssr / dof / sxx);
  return fit;
}

SweepResult RunScalingSweep(const SweepOptions& options) {
  if (options.ns.empty() || options.seeds.empty() || options.alphas.empty()) {
    throw std::invalid_argument("sweep needs alphas, ns and seeds");
  }
  for (int n : options.ns) {
    if (!PowerOfFour(n)) throw std::invalid_argument("n must be a power of 4");
    if (options.scenario == Scenario::kNearest && ComputeL(n) < 1) {
      throw std::invalid_argument("nearest scenario needs L(n) >= 1");
    }
  }
  SweepResult result;
  for (double alpha : options.alphas) {
    for (int n : options.ns) {
      for (std::uint64_t seed : options.seeds) {
        SweepRow row;
        row.n = n;
        row.seed = seed;
        row.alpha = alpha;
        row.scenario = options.scenario;
        row.beta = options.scenario == Scenario::kComplete ? options.beta : kNaN;
        row.rhohat = kNaN;
        row.phi_nearest_strategy = kNaN;
        result.rows.push_back(row);
      }
    }
  }
  ParallelFor(result.rows.size(), [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    const NodePlacement placement = GeneratePlacement(row.n, row.seed);
    const TreeGraph tree = TreeGraph::Build(placement, row.alpha);
    if (row.scenario == Scenario::kComplete) {
      const CachingTraffic traffic = ScenarioComplete(placement, row.beta, row.seed);
      row.phi = Phi(tree, traffic).value;
      row.rhohat = RhoHatTree(tree, traffic).value;
    } else {
      const CachingTraffic traffic = ScenarioNearest(placement);
      row.phi = Phi(tree, traffic).value;
      row.phi_nearest_strategy = PhiNearestCache(tree, placement, traffic).value;
    }
  });

  for (double alpha : options.alphas) {
    for (const char* quantity : {"phi", "rhohat", "phi_nearest_strategy"}) {
      std::vector<int> ns;
      std::vector<double> values;
      for (const SweepRow& row : result.rows) {
        if (row.alpha != alpha) continue;
        const std::string q = quantity;
        const double v = q == "phi" ? row.phi : q == "rhohat" ? row.rhohat : row.phi_nearest_strategy;
        if (std::isnan(v)) continue;
        ns.push_back(row.n);
        values.push_back(v);
      }
      if (std::set<int>(ns.begin(), ns.end()).size() < 3) continue;
      result.fits.push_back({alpha, quantity, FitExponent(ns, values)});
    }
  }
  return result;
}

void WriteSweepCsv(const SweepResult& result, std::ostream& out) {
  out << "n,seed,alpha,scenario,beta,phi,rhohat,phi_nearest_strategy\n";
  out.precision(17);
  for (const SweepRow& row : result.rows) {
    out << row.n << ',' << row.seed << ',' << row.alpha << ',' << ToString(row.scenario) << ','
        << row.beta << ',' << row.phi << ',' << row.rhohat << ',' << row.phi_nearest_strategy
        << '\n';
  }
}

Json FitsToJson(const SweepResult& result) {
  Json fits = Json::array();
  for (const LabeledFit& f : result.fits) {
    fits.push_back({{"alpha", f.alpha},
                    {"quantity", f.quantity},
                    {"slope", f.fit.slope},
                    {"intercept", f.fit.intercept},
                    {"half_width_95", f.fit.half_width},
                    {"points", f.fit.points},
                    {"distinct_n", f.fit.distinct_n},
                    {"residuals", f.fit.residuals}});
  }
  return {{"fits", fits},
          {"note", "phi on the tree graph stands in for the wireless rate; the cut "
                   "sandwich b4(n) rhohat <= phi <= rhohat holds per instance"}};
}

CachingTraffic RandomTraffic(int n, std::mt19937_64& rng, const RandomTrafficOptions& options) {
  if (n < 2) throw std::invalid_argument("random traffic needs n >= 2");
  std::uniform_int_distribution<int> node(0, n - 1);
  std::uniform_int_distribution<int> set_count(1, std::max(1, options.max_cache_sets));
  std::uniform_int_distribution<int> entry_count(1, std::max(1, options.max_entries));
  std::uniform_real_distribution<double> rate(0.1, 1.0);
  const int max_size = std::max(1, std::min(options.max_cache_size, n - 1));
  std::uniform_int_distribution<int> set_size(1, max_size);

  std::vector<CacheSet> sets;
  const int k = set_count(rng);
  for (int i = 0; i < k; ++i) {
    const int size = set_size(rng);
    std::set<int> members;
    while (static_cast<int>(members.size()) < size) members.insert(node(rng));
    sets.emplace_back(members.begin(), members.end());
  }
  std::uniform_int_distribution<std::size_t> pick(0, sets.size() - 1);
  CachingTraffic traffic(n);
  const int entries = entry_count(rng);
  for (int i = 0; i < entries; ++i) {
    const CacheSet& caches = sets[pick(rng)];
    int dest = node(rng);
    while (std::binary_search(caches.begin(), caches.end(), dest)) dest = node(rng);
    traffic.Add(caches, dest, rate(rng));
  }
  return traffic;
}

RandomInstance MakeRandomInstance(int n, std::uint64_t seed, const RandomTrafficOptions& options) {
  RandomInstance instance;
  instance.placement = GeneratePlacement(n, seed);
  std::mt19937_64 rng = InstanceRng(n, seed, 0, 7);
  instance.traffic = RandomTraffic(n, rng, options);
  return instance;
}

Json ToJson(const RandomInstance& instance) {
  return {{"placement", ToJson(instance.placement)},
          {"alpha", instance.alpha},
          {"traffic", ToJson(instance.traffic)}};
}

std::vector<std::pair<int, int>> RandomLeafPairs(int n, int count, std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("leaf pairs need n >= 2");
  std::uniform_int_distribution<int> node(0, n - 1);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < count; ++i) {
    const int u = node(rng);
    int w = node(rng);
    while (w == u) w = node(rng);
    pairs.emplace_back(u, w);
  }
  return pairs;
}

LPInstance RandomSmallLP(std::mt19937_64& rng, int max_vars, int max_rows) {
  std::uniform_int_distribution<int> vars(1, max_vars);
  std::uniform_int_distribution<int> rows(1, max_rows);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> cost(-3, 5);
  std::uniform_int_distribution<int> rhs(-4, 8);
  std::uniform_int_distribution<int> sense(0, 9);
  LPInstance lp;
  lp.maximize = (rng() & 1) != 0;
  const int nv = vars(rng);
  for (int j = 0; j < nv; ++j) lp.AddVariable(cost(rng));
  const int nr = rows(rng);
  for (int i = 0; i < nr; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < nv; ++j) {
      const int c = coef(rng);
      if (c != 0) terms.emplace_back(j, c);
    }
    const int s = sense(rng);
    const RowSense row_sense = s < 6 ? RowSense::kLessEqual
                               : s < 8 ? RowSense::kGreaterEqual
                                       : RowSense::kEqual;
    lp.AddRow(std::move(terms), row_sense, rhs(rng));
  }
  for (int j = 0; j < nv; ++j) lp.AddRow({{j, 1.0}}, RowSense::kLessEqual, 5.0);
  return lp;
}

bool CampaignReport::AllPassed() const {
  return std::all_of(classes.begin(), classes.end(),
                     [](const InvariantClass& c) { return c.failed == 0; });
}

CampaignReport RunPropertyCampaign(const CampaignOptions& options) {
  enum { kFlowLeCut, kSandwich, kOracle, kMulticut, kLpExact, kDelivery, kCount };
  CampaignReport report;
  for (const char* name :
       {"flow_le_cut", "sandwich", "rhohat_oracle", "multicut", "lp_exact", "delivery"}) {
    report.classes.push_back({name, 0, 0, {}});
  }
  auto record = [&](int cls, bool ok, const std::function<Json()>& dump) {
    InvariantClass& c = report.classes[cls];
    if (ok) {
      ++c.passed;
    } else {
      ++c.failed;
      c.failures.push_back(dump());
    }
  };

  for (int n : options.ns) {
    for (std::uint64_t seed : options.seeds) {
      for (int index = 0; index < options.instances_per; ++index) {
        std::mt19937_64 rng = InstanceRng(n, seed, index, 1);
        RandomInstance instance;
        instance.placement = GeneratePlacement(n, rng());
        instance.traffic = RandomTraffic(n, rng);
        const TreeGraph tree = TreeGraph::Build(instance.placement, instance.alpha);
        const CachingTraffic& traffic = instance.traffic;

        auto guarded = [&](int cls, const std::function<bool(Json&)>& check) {
          Json detail = Json::object();
          bool ok = false;
          try {
            ok = check(detail);
          } catch (const std::exception& e) {
            detail["error"] = e.what();
          }
          record(cls, ok, [&] {
            Json dump = ToJson(instance);
            dump["detail"] = detail;
            return dump;
          });
        };

        guarded(kFlowLeCut, [&](Json& detail) {
          const double phi = Phi(tree, traffic).value;
          const double rho = RhoHatTree(tree, traffic).value;
          detail["phi"] = NumberOrNull(phi);
          detail["rhohat"] = NumberOrNull(rho);
          return std::isinf(rho) || phi <= rho * (1.0 + 1e-6);
        });
        guarded(kSandwich, [&](Json& detail) {
          const SandwichReport r = Sandwich(tree, traffic);
          detail = ToJson(r);
          return r.AllHold();
        });
        if (tree.num_vertices() <= kMaxBruteForceVertices) {
          guarded(kOracle, [&](Json& detail) {
            const RhoHat exact = RhoHatBruteForce(tree, traffic);
            const RhoHat fast = RhoHatTree(tree, traffic);
            detail["brute_force"] = NumberOrNull(exact.value);
            detail["tree_search"] = NumberOrNull(fast.value);
            return WithinRelative(exact.value, fast.value, 1e-9);
          });
        }
        guarded(kMulticut, [&](Json& detail) {
          std::uniform_int_distribution<int> count(1, 5);
          const auto pairs = RandomLeafPairs(n, count(rng), rng);
          const Multicut cut = TreeMulticut(tree, pairs);
          const double sigma = MaxSumRateTree(tree, pairs).sigma;
          Json list = Json::array();
          for (const auto& [u, w] : pairs) list.push_back({u, w});
          detail["pairs"] = list;
          detail["multicut_cost"] = cut.cost;
          detail["sigma"] = sigma;
          return SeparatesAll(tree, cut, pairs) && sigma >= 0.5 * cut.cost * (1.0 - 1e-6);
        });
        guarded(kLpExact, [&](Json& detail) {
          const LPInstance lp = RandomSmallLP(rng);
          const LPSolution approx = SolveLP(lp);
          const LPSolution exact = SolveLPExact(lp);
          detail["lp"] = ToJson(lp);
          detail["status"] = ToString(approx.status);
          detail["exact_status"] = ToString(exact.status);
          if (approx.status != exact.status) return false;
          if (approx.status != LPStatus::kOptimal) return true;
          detail["objective"] = approx.objective;
          detail["exact_objective"] = exact.objective;
          detail["gap"] = approx.gap;
          return WithinRelative(approx.objective, exact.objective, 1e-8) && approx.gap <= 1e-8;
        });
        guarded(kDelivery, [&](Json& detail) {
          std::uniform_int_distribution<std::int64_t> size(0, 5000);
          SizeMap sizes;
          for (const auto& [key, rate] : traffic.entries()) sizes[key] = size(rng);
          detail["sizes"] = ToJson(sizes);
          const DeliveryTrace trace = SimulateDelivery(tree, traffic, sizes);
          detail["all_complete"] = trace.AllComplete();
          detail["all_conserved"] = trace.AllConserved();
          return trace.AllComplete() && trace.AllConserved();
        });
      }
    }
  }
  return report;
}

Json ToJson(const CampaignReport& report) {
  Json classes = Json::array();
  for (const InvariantClass& c : report.classes) {
    classes.push_back({{"name", c.name},
                       {"passed", c.passed},
                       {"failed", c.failed},
                       {"failures", c.failures}});
  }
  return {{"classes", classes}, {"all_passed", report.AllPassed()}};
}

}  // namespace cachecap
