// Command-line front end for the cachecap library.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cachecap/channel.h"
#include "cachecap/cutbounds.h"
#include "cachecap/harness.h"
#include "cachecap/json_io.h"
#include "cachecap/lpcore.h"
#include "cachecap/placement.h"
#include "cachecap/scheme.h"
#include "cachecap/traffic.h"
#include "cachecap/treegraph.h"

namespace {

using namespace cachecap;

void Emit(const std::string& path, const Json& value) {
  if (path.empty() || path == "-") {
    std::cout << value.dump(2) << '\n';
  } else {
    WriteJsonFile(path, value);
  }
}

// [ids] puts the listed nodes on the transmit side and everyone else on the
// receive side; {"s1": [...], "s2": [...]} gives both sides.
std::pair<std::vector<int>, std::vector<int>> CutFromJson(const Json& value, int n) {
  std::vector<int> s1, s2;
  if (value.is_array()) {
    s1 = value.get<std::vector<int>>();
    std::vector<char> inside(n, 0);
    for (int u : s1) {
      if (u < 0 || u >= n) throw std::invalid_argument("cut node out of range");
      inside[u] = 1;
    }
    for (int v = 0; v < n; ++v) {
      if (!inside[v]) s2.push_back(v);
    }
  } else {
    s1 = value.at("s1").get<std::vector<int>>();
    s2 = value.at("s2").get<std::vector<int>>();
  }
  return {s1, s2};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity bounds and delivery simulation for caching wireless networks"};
  app.require_subcommand(1);
  int exit_code = 0;

  // gen-placement
  int gp_n = 0;
  std::uint64_t gp_seed = 1;
  std::string gp_out;
  auto* gen = app.add_subcommand("gen-placement", "Sample a uniform node placement");
  gen->add_option("--n", gp_n, "Number of nodes")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gp_seed, "Random seed");
  gen->add_option("--out", gp_out, "Output JSON (stdout if omitted)");
  gen->callback([&] { Emit(gp_out, ToJson(GeneratePlacement(gp_n, gp_seed))); });

  // check-regularity
  std::string cr_in, cr_out;
  auto* check = app.add_subcommand("check-regularity", "Evaluate the placement regularity conditions");
  check->add_option("--in", cr_in, "Placement JSON")->required();
  check->add_option("--out", cr_out, "Output JSON (stdout if omitted)");
  check->callback([&] {
    const RegularityReport report = CheckRegularity(PlacementFromJson(ReadJsonFile(cr_in)));
    Emit(cr_out, ToJson(report));
  });

  // build-tree
  std::string bt_in, bt_out;
  double bt_alpha = 4.0;
  auto* build = app.add_subcommand("build-tree", "Build the capacitated tree graph");
  build->add_option("--in", bt_in, "Placement JSON")->required();
  build->add_option("--alpha", bt_alpha, "Path-loss exponent (> 2)");
  build->add_option("--out", bt_out, "Output JSON (stdout if omitted)");
  build->callback([&] {
    Emit(bt_out, ToJson(TreeGraph::Build(PlacementFromJson(ReadJsonFile(bt_in)), bt_alpha)));
  });

  // scenario
  std::string sc_kind, sc_in, sc_out;
  double sc_beta = 0.5;
  std::uint64_t sc_seed = 1;
  auto* scenario = app.add_subcommand("scenario", "Generate scenario traffic");
  scenario->add_option("kind", sc_kind, "nearest or complete")
      ->required()
      ->check(CLI::IsMember({"nearest", "complete"}));
  scenario->add_option("--in", sc_in, "Placement JSON")->required();
  scenario->add_option("--beta", sc_beta, "Cache count exponent (complete)");
  scenario->add_option("--seed", sc_seed, "Cache selection seed (complete)");
  scenario->add_option("--out", sc_out, "Output JSON (stdout if omitted)");
  scenario->callback([&] {
    const NodePlacement placement = PlacementFromJson(ReadJsonFile(sc_in));
    const CachingTraffic traffic = ParseScenario(sc_kind) == Scenario::kNearest
                                       ? ScenarioNearest(placement)
                                       : ScenarioComplete(placement, sc_beta, sc_seed);
    Emit(sc_out, ToJson(traffic));
  });

  // solve-phi
  std::string sp_tree, sp_traffic, sp_out, sp_method = "auto";
  bool sp_dual = false;
  auto* solve = app.add_subcommand("solve-phi", "Largest scaling of the traffic routable on the tree");
  solve->add_option("--tree", sp_tree, "Tree JSON")->required();
  solve->add_option("--traffic", sp_traffic, "Traffic JSON")->required();
  solve->add_option("--method", sp_method, "auto, lp or maxflow")
      ->check(CLI::IsMember({"auto", "lp", "maxflow"}));
  solve->add_flag("--dual", sp_dual, "Also dump directed edge prices and pair distances");
  solve->add_option("--out", sp_out, "Output JSON (stdout if omitted)");
  solve->callback([&] {
    const TreeGraph tree = TreeFromJson(ReadJsonFile(sp_tree));
    const CachingTraffic traffic = TrafficFromJson(ReadJsonFile(sp_traffic), tree.n());
    const PhiMethod method = sp_method == "lp"       ? PhiMethod::kLinearProgram
                             : sp_method == "maxflow" ? PhiMethod::kMaxFlow
                                                      : PhiMethod::kAuto;
    Json out = ToJson(Phi(tree, traffic, method));
    if (sp_dual) {
      const DirectedCacheGraph graph = DirectedCacheGraph::Build(tree, traffic.CacheSets());
      const DirectedFlowResult directed =
          ConcurrentFlowDirected(graph, DirectedUnicast(graph, Normalize(traffic)));
      out["phi_tilde"] = NumberOrNull(directed.phi_tilde);
      out["dual"] = DualsToJson(tree, directed.duals);
    }
    Emit(sp_out, out);
  });

  // sandwich
  std::string sw_tree, sw_traffic, sw_out;
  auto* sandwich = app.add_subcommand("sandwich", "Flow and cut bounds with every chain link checked");
  sandwich->add_option("--tree", sw_tree, "Tree JSON")->required();
  sandwich->add_option("--traffic", sw_traffic, "Traffic JSON")->required();
  sandwich->add_option("--out", sw_out, "Output JSON (stdout if omitted)");
  sandwich->callback([&] {
    const TreeGraph tree = TreeFromJson(ReadJsonFile(sw_tree));
    const CachingTraffic traffic = TrafficFromJson(ReadJsonFile(sw_traffic), tree.n());
    const SandwichReport report = Sandwich(tree, traffic);
    Emit(sw_out, ToJson(report));
    if (!report.AllHold()) exit_code = 3;
  });

  // rhohat
  std::string rh_tree, rh_traffic, rh_out;
  bool rh_exact = false, rh_tree_search = false;
  auto* rhohat = app.add_subcommand("rhohat", "Minimum cut ratio over vertex sets of the tree");
  rhohat->add_option("--tree", rh_tree, "Tree JSON")->required();
  rhohat->add_option("--traffic", rh_traffic, "Traffic JSON")->required();
  auto* exact_flag = rhohat->add_flag("--exact", rh_exact, "Enumerate every vertex set");
  auto* search_flag = rhohat->add_flag("--tree-search", rh_tree_search, "Search unions of cache sets");
  exact_flag->excludes(search_flag);
  rhohat->add_option("--out", rh_out, "Output JSON (stdout if omitted)");
  rhohat->callback([&] {
    const TreeGraph tree = TreeFromJson(ReadJsonFile(rh_tree));
    const CachingTraffic traffic = TrafficFromJson(ReadJsonFile(rh_traffic), tree.n());
    Json out = ToJson(rh_exact ? RhoHatBruteForce(tree, traffic) : RhoHatTree(tree, traffic));
    out["method"] = rh_exact ? "exact" : "tree-search";
    Emit(rh_out, out);
  });

  // mimo-cut
  std::string mc_placement, mc_cut, mc_out;
  double mc_alpha = 4.0;
  int mc_realizations = 1;
  std::uint64_t mc_seed = 1;
  bool mc_fast = false;
  auto* mimo = app.add_subcommand("mimo-cut", "Capacity bracket across a cut over channel draws (CSV)");
  mimo->add_option("--placement", mc_placement, "Placement JSON")->required();
  mimo->add_option("--alpha", mc_alpha, "Path-loss exponent (> 2)");
  mimo->add_option("--cut", mc_cut, "Cut JSON: [ids] or {\"s1\": [...], \"s2\": [...]}")->required();
  mimo->add_option("--realizations", mc_realizations, "Number of phase draws")
      ->check(CLI::PositiveNumber);
  mimo->add_option("--seed", mc_seed, "Base phase seed");
  mimo->add_flag("--fast", mc_fast, "Redraw phases per channel use instead of per realization");
  mimo->add_option("--out", mc_out, "Output CSV (stdout if omitted)");
  mimo->callback([&] {
    const NodePlacement placement = PlacementFromJson(ReadJsonFile(mc_placement));
    const auto [s1, s2] = CutFromJson(ReadJsonFile(mc_cut), placement.n);
    std::ofstream file;
    if (!mc_out.empty() && mc_out != "-") {
      file.open(mc_out);
      if (!file) throw std::runtime_error("cannot write " + mc_out);
    }
    std::ostream& out = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;
    out << "realization,lower,upper,bracket_ok,near,far,split_bound,split_holds\n";
    out.precision(12);
    const bool whole_complement =
        static_cast<int>(s1.size() + s2.size()) == placement.n;
    for (int r = 0; r < mc_realizations; ++r) {
      const FadingMode mode = mc_fast ? FadingMode::kFast : FadingMode::kSlow;
      const ChannelRealization channels =
          ChannelRealization::Draw(placement, mc_alpha, mc_seed + static_cast<std::uint64_t>(r), mode);
      const CutCapacityEstimate estimate = MimoCutCapacity(channels, s1, s2);
      const bool ok = estimate.lower <= estimate.upper + 1e-8 * std::max(1.0, estimate.upper);
      if (!ok) exit_code = 3;
      out << r << ',' << estimate.lower << ',' << estimate.upper << ',' << (ok ? 1 : 0);
      if (whole_complement) {
        const HadamardSplit split = HadamardSplitCheck(channels, s1);
        if (!split.holds) exit_code = 3;
        out << ',' << split.near.size() << ',' << split.far.size() << ','
            << split.upper_near + split.upper_far << ',' << (split.holds ? 1 : 0);
      } else {
        out << ",,,,";
      }
      out << '\n';
    }
  });

  // simulate
  std::string sim_tree, sim_traffic, sim_sizes, sim_trace;
  auto* simulate = app.add_subcommand("simulate", "Deliver messages through the cell hierarchy");
  simulate->add_option("--tree", sim_tree, "Tree JSON")->required();
  simulate->add_option("--traffic", sim_traffic, "Traffic JSON")->required();
  simulate->add_option("--sizes", sim_sizes, "Message sizes JSON")->required();
  simulate->add_option("--trace", sim_trace, "Output trace JSON (stdout if omitted)");
  simulate->callback([&] {
    const TreeGraph tree = TreeFromJson(ReadJsonFile(sim_tree));
    const CachingTraffic traffic = TrafficFromJson(ReadJsonFile(sim_traffic), tree.n());
    const SizeMap sizes = SizesFromJson(ReadJsonFile(sim_sizes), tree.n());
    const DeliveryTrace trace = SimulateDelivery(tree, traffic, sizes);
    Emit(sim_trace, ToJson(trace));
    if (!trace.AllComplete() || !trace.AllConserved()) exit_code = 3;
  });

  // sweep
  std::string sw_scenario = "complete", sw_alphas = "4", sw_ns, sw_seeds = "1..10", sw_csv, sw_fits;
  double sw_beta = 0.5;
  auto* sweep = app.add_subcommand("sweep", "Scaling sweep over n with exponent fits");
  sweep->add_option("--scenario", sw_scenario, "nearest or complete")
      ->check(CLI::IsMember({"nearest", "complete"}));
  sweep->add_option("--beta", sw_beta, "Cache count exponent (complete)");
  sweep->add_option("--alpha", sw_alphas, "Path-loss exponents, comma separated");
  sweep->add_option("--ns", sw_ns, "Powers of 4, comma separated")->required();
  sweep->add_option("--seeds", sw_seeds, "Seeds such as 1..20 or 1,2,3");
  sweep->add_option("--out", sw_csv, "Output CSV (stdout if omitted)");
  sweep->add_option("--fits", sw_fits, "Output JSON with exponent fits (stderr if omitted)");
  sweep->callback([&] {
    SweepOptions options;
    options.scenario = ParseScenario(sw_scenario);
    options.beta = sw_beta;
    options.alphas = ParseDoubleList(sw_alphas);
    options.ns = ParseIntList(sw_ns);
    options.seeds = ParseSeeds(sw_seeds);
    const SweepResult result = RunScalingSweep(options);
    if (sw_csv.empty() || sw_csv == "-") {
      WriteSweepCsv(result, std::cout);
    } else {
      std::ofstream out(sw_csv);
      if (!out) throw std::runtime_error("cannot write " + sw_csv);
      WriteSweepCsv(result, out);
    }
    if (sw_fits.empty()) {
      std::cerr << FitsToJson(result).dump(2) << '\n';
    } else {
      WriteJsonFile(sw_fits, FitsToJson(result));
    }
  });

  // campaign
  std::string cp_out, cp_ns = "4,16", cp_seeds = "1..5";
  int cp_instances = 4;
  auto* campaign = app.add_subcommand("campaign", "Monte-Carlo property campaign");
  campaign->add_option("--ns", cp_ns, "Node counts, comma separated");
  campaign->add_option("--seeds", cp_seeds, "Seeds such as 1..20 or 1,2,3");
  campaign->add_option("--instances", cp_instances, "Instances per (n, seed)")
      ->check(CLI::PositiveNumber);
  campaign->add_option("--out", cp_out, "Output JSON (stdout if omitted)");
  campaign->callback([&] {
    CampaignOptions options;
    options.ns = ParseIntList(cp_ns);
    options.seeds = ParseSeeds(cp_seeds);
    options.instances_per = cp_instances;
    const CampaignReport report = RunPropertyCampaign(options);
    Emit(cp_out, ToJson(report));
    for (const InvariantClass& c : report.classes) {
      std::cerr << c.name << ": " << c.passed << " passed, " << c.failed << " failed\n";
    }
    if (!report.AllPassed()) exit_code = 3;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
