// Scaling sweeps with log-log exponent fits, random instance generators, and
// the Monte-Carlo property campaign.

#ifndef CACHECAP_HARNESS_H_
#define CACHECAP_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "cachecap/json_io.h"
#include "cachecap/lp.h"
#include "cachecap/placement.h"
#include "cachecap/traffic.h"
#include "cachecap/treegraph.h"

namespace cachecap {

enum class Scenario { kNearest, kComplete };

const char* ToString(Scenario scenario);
// Throws std::invalid_argument on anything but "nearest" or "complete".
Scenario ParseScenario(const std::string& name);

// "1..20", "1,2,3" or a mix such as "1..4,9".
std::vector<std::uint64_t> ParseSeeds(const std::string& text);
std::vector<int> ParseIntList(const std::string& text);
std::vector<double> ParseDoubleList(const std::string& text);

struct SweepRow {
  int n = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  Scenario scenario = Scenario::kComplete;
  double beta = 0.0;
  double phi = 0.0;
  double rhohat = 0.0;                // NaN when not computed
  double phi_nearest_strategy = 0.0;  // NaN when not computed
};

// Least-squares slope of ln y against ln n with a 95% Student-t half-width.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;
  int points = 0;
  int distinct_n = 0;
  std::vector<double> residuals;
};

// Throws std::invalid_argument with fewer than 3 distinct n or any
// non-positive or non-finite value.
ExponentFit FitExponent(const std::vector<int>& ns, const std::vector<double>& values);

struct LabeledFit {
  double alpha = 0.0;
  std::string quantity;  // "phi", "rhohat" or "phi_nearest_strategy"
  ExponentFit fit;
};

struct SweepOptions {
  Scenario scenario = Scenario::kComplete;
  std::vector<double> alphas{4.0};
  std::vector<int> ns;
  std::vector<std::uint64_t> seeds;
  double beta = 0.5;  // complete scenario only
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<LabeledFit> fits;
};

// One row per (alpha, n, seed), in that nesting order. The complete scenario
// fills rhohat; the nearest scenario fills phi_nearest_strategy. Throws
// std::invalid_argument when n is not a power of 4 or when the nearest
// scenario meets L(n) < 1.
SweepResult RunScalingSweep(const SweepOptions& options);

// Header: n,seed,alpha,scenario,beta,phi,rhohat,phi_nearest_strategy
void WriteSweepCsv(const SweepResult& result, std::ostream& out);
Json FitsToJson(const SweepResult& result);

// Random tree instance: uniform placement, and traffic with 1..max_entries
// requests, each from 1..max_cache_size random caches to a destination
// outside the cache set.
struct RandomInstance {
  NodePlacement placement;
  double alpha = 4.0;
  CachingTraffic traffic;
};

struct RandomTrafficOptions {
  int max_entries = 6;
  int max_cache_size = 3;
  int max_cache_sets = 8;  // distinct sets drawn per instance
};

CachingTraffic RandomTraffic(int n, std::mt19937_64& rng, const RandomTrafficOptions& options = {});
RandomInstance MakeRandomInstance(int n, std::uint64_t seed, const RandomTrafficOptions& options = {});
Json ToJson(const RandomInstance& instance);

// Random leaf pairs with distinct endpoints.
std::vector<std::pair<int, int>> RandomLeafPairs(int n, int count, std::mt19937_64& rng);

// Small dense LP with integer data and a mix of row senses. Always bounded
// (every variable is boxed); feasibility varies.
LPInstance RandomSmallLP(std::mt19937_64& rng, int max_vars = 5, int max_rows = 5);

struct CampaignOptions {
  std::vector<int> ns{4, 16};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int instances_per = 5;
};

struct InvariantClass {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::vector<Json> failures;  // replayable instances
};

struct CampaignReport {
  std::vector<InvariantClass> classes;
  bool AllPassed() const;
};

// Runs every invariant class over each (n, seed, instance index).
// Classes: flow_le_cut, sandwich, rhohat_oracle, multicut, lp_exact, delivery.
CampaignReport RunPropertyCampaign(const CampaignOptions& options);
Json ToJson(const CampaignReport& report);

}  // namespace cachecap

#endif  // CACHECAP_HARNESS_H_
