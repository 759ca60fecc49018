#include "cachecap/json_io.h"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cachecap {

namespace {

template <typename T>
T Field(const Json& value, const char* key) {
  if (!value.is_object() || !value.contains(key)) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  try {
    return value.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad field '") + key + "': " + e.what());
  }
}

Json PairList(const std::vector<std::pair<int, int>>& pairs) {
  Json out = Json::array();
  for (const auto& [a, b] : pairs) out.push_back({a, b});
  return out;
}

}  // namespace

Json NumberOrNull(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << value.dump(2) << '\n';
}

Json ToJson(const NodePlacement& placement) {
  Json coords = Json::array();
  for (const Point& p : placement.coords) coords.push_back({p.x, p.y});
  return {{"n", placement.n}, {"seed", placement.seed}, {"coords", coords}};
}

NodePlacement PlacementFromJson(const Json& value) {
  const int n = Field<int>(value, "n");
  const auto seed = Field<std::uint64_t>(value, "seed");
  const Json& coords = value.at("coords");
  if (!coords.is_array()) throw std::invalid_argument("coords must be an array");
  std::vector<Point> points;
  for (const Json& c : coords) {
    if (!c.is_array() || c.size() != 2) throw std::invalid_argument("coordinate must be [x, y]");
    points.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  if (static_cast<int>(points.size()) != n) throw std::invalid_argument("n does not match coords");
  return MakePlacement(std::move(points), seed);
}

Json ToJson(const RegularityReport& report) {
  return {{"min_distance_ok", report.min_distance_ok},
          {"unit_cell_max_ok", report.unit_cell_max_ok},
          {"logn_cell_min_ok", report.logn_cell_min_ok},
          {"proportional_ok", report.proportional_ok},
          {"overall", report.overall},
          {"unit_cell_level", report.unit_cell_level},
          {"logn_cell_level", report.logn_cell_level},
          {"proportional_max_level", report.proportional_max_level}};
}

Json ToJson(const TreeGraph& tree) {
  Json vertices = Json::array();
  for (int v = 0; v < tree.num_vertices(); ++v) {
    const TreeVertex& t = tree.vertex(v);
    vertices.push_back({{"id", v}, {"level", t.level}, {"cell", t.cell},
                        {"parent", t.parent}, {"node", t.node}});
  }
  Json edges = Json::array();
  for (int e = 0; e < tree.num_edges(); ++e) {
    edges.push_back({{"id", e}, {"child", tree.EdgeChild(e)}, {"parent", tree.EdgeParent(e)},
                     {"level", tree.EdgeLevel(e)}, {"capacity", tree.capacity(e)}});
  }
  return {{"n", tree.n()}, {"alpha", tree.alpha()}, {"depth", tree.depth()},
          {"vertices", vertices}, {"edges", edges}};
}

TreeGraph TreeFromJson(const Json& value) {
  const int n = Field<int>(value, "n");
  const double alpha = Field<double>(value, "alpha");
  const Json& vertices = value.at("vertices");
  std::vector<int> leaf_cells(n, 0);
  std::vector<Json> by_id(vertices.size());
  for (const Json& v : vertices) {
    const int id = Field<int>(v, "id");
    if (id < 0 || id >= static_cast<int>(by_id.size())) throw std::invalid_argument("vertex id out of range");
    by_id[id] = v;
  }
  for (const Json& v : by_id) {
    const int node = Field<int>(v, "node");
    if (node < 0) continue;
    if (node >= n) throw std::invalid_argument("leaf node out of range");
    const int parent = Field<int>(v, "parent");
    if (parent < 0 || parent >= static_cast<int>(by_id.size())) {
      throw std::invalid_argument("leaf parent out of range");
    }
    leaf_cells[node] = Field<int>(by_id[parent], "cell");
  }
  TreeGraph tree = TreeGraph::FromLeafCells(n, alpha, leaf_cells);
  if (value.contains("edges")) {
    const Json& edges = value.at("edges");
    if (static_cast<int>(edges.size()) != tree.num_edges()) {
      throw std::invalid_argument("edge count does not match the rebuilt tree");
    }
    for (const Json& e : edges) {
      const int id = Field<int>(e, "id");
      if (id < 0 || id >= tree.num_edges()) throw std::invalid_argument("edge id out of range");
      const double c = Field<double>(e, "capacity");
      if (std::abs(c - tree.capacity(id)) > 1e-9 * std::max(1.0, tree.capacity(id))) {
        throw std::invalid_argument("edge capacity does not match the rebuilt tree");
      }
    }
  }
  return tree;
}

Json ToJson(const CachingTraffic& traffic) {
  Json out = Json::array();
  for (const auto& [key, rate] : traffic.entries()) {
    out.push_back({{"caches", key.first}, {"dest", key.second}, {"rate", rate}});
  }
  return out;
}

CachingTraffic TrafficFromJson(const Json& value, int n) {
  if (!value.is_array()) throw std::invalid_argument("traffic must be an array");
  CachingTraffic traffic(n);
  for (const Json& entry : value) {
    traffic.Add(Field<std::vector<int>>(entry, "caches"), Field<int>(entry, "dest"),
                Field<double>(entry, "rate"));
  }
  return traffic;
}

SizeMap SizesFromJson(const Json& value, int n) {
  if (!value.is_array()) throw std::invalid_argument("sizes must be an array");
  SizeMap sizes;
  for (const Json& entry : value) {
    const int dest = Field<int>(entry, "dest");
    const auto size = Field<std::int64_t>(entry, "size");
    if (dest < 0 || dest >= n) throw std::invalid_argument("destination out of range");
    if (size < 0) throw std::invalid_argument("negative message size");
    sizes[{CanonicalCacheSet(Field<std::vector<int>>(entry, "caches")), dest}] = size;
  }
  return sizes;
}

Json ToJson(const SizeMap& sizes) {
  Json out = Json::array();
  for (const auto& [key, size] : sizes) {
    out.push_back({{"caches", key.first}, {"dest", key.second}, {"size", size}});
  }
  return out;
}

Json ToJson(const FlowSolution& flow) {
  Json paths = Json::array();
  for (const PathFlow& p : flow.paths) {
    paths.push_back({{"caches", p.caches}, {"source", p.source}, {"dest", p.dest}, {"rate", p.rate}});
  }
  return {{"directed", flow.directed}, {"flows", paths}, {"loads", flow.loads}};
}

Json ToJson(const PhiResult& result) {
  const Json flow = ToJson(result.flow);
  return {{"phi", NumberOrNull(result.value)},
          {"infinite", result.infinite},
          {"forced_zero", result.forced_zero},
          {"trivially_infinite", result.trivially_infinite},
          {"method", result.method},
          {"flows", flow["flows"]},
          {"loads", flow["loads"]}};
}

Json DualsToJson(const TreeGraph& tree, const DualSolution& duals) {
  Json prices = Json::array();
  for (std::size_t id = 0; id < duals.edge_price.size(); ++id) {
    const int e = static_cast<int>(id / 2);
    prices.push_back({{"edge", e},
                      {"direction", id % 2 == 0 ? "up" : "down"},
                      {"capacity", tree.capacity(e)},
                      {"m", duals.edge_price[id]}});
  }
  Json pairs = Json::array();
  for (const auto& [pair, d] : duals.distance) {
    const auto it = duals.demand_price.find(pair);
    pairs.push_back({{"cache_node", pair.first},
                     {"dest", pair.second},
                     {"d", d},
                     {"demand_price", it == duals.demand_price.end() ? 0.0 : it->second}});
  }
  return {{"edge_prices", prices}, {"distances", pairs}, {"objective", duals.objective}};
}

Json ToJson(const CutSpec& cut) {
  return {{"members", cut.Members()},
          {"capacity_across", cut.capacity_across},
          {"demand_across", cut.demand_across},
          {"ratio", NumberOrNull(cut.ratio())}};
}

Json ToJson(const RhoHat& rhohat) {
  return {{"rhohat", NumberOrNull(rhohat.value)},
          {"infinite", rhohat.infinite},
          {"witness", ToJson(rhohat.witness)}};
}

Json ToJson(const SandwichReport& r) {
  const BottleneckSet& b = r.bottleneck;
  return {
      {"n", r.n},
      {"b4", r.b4},
      {"log_factor", r.log_factor},
      {"phi", NumberOrNull(r.phi)},
      {"rhohat", NumberOrNull(r.rhohat)},
      {"rhohat_method", r.rhohat_method},
      {"witness", ToJson(r.witness)},
      {"phi_tilde", NumberOrNull(r.phi_tilde)},
      {"dual_objective", r.dual_objective},
      {"bottleneck",
       {{"pairs", PairList(b.pairs)},
        {"buckets", b.buckets},
        {"chosen_bucket", b.chosen_bucket},
        {"threshold", b.threshold},
        {"cumulative", b.cumulative},
        {"demand", b.demand}}},
      {"sigma_tilde", NumberOrNull(r.sigma_tilde)},
      {"induced_pairs", PairList(r.induced_pairs)},
      {"sigma", NumberOrNull(r.sigma)},
      {"multicut",
       {{"edges", r.multicut.edges},
        {"cost", r.multicut.cost},
        {"num_components", r.multicut.num_components},
        {"packed_flow", r.multicut.packed_flow}}},
      {"boundary_sum", r.boundary_sum},
      {"component_demand", r.component_demand},
      {"checks",
       {{"flow_le_cut", r.flow_le_cut},
        {"directed_half", r.directed_half},
        {"bottleneck_bound", r.bottleneck_bound},
        {"sum_rate_cut", r.sum_rate_cut},
        {"core_sum_rate", r.core_sum_rate},
        {"multicut_half", r.multicut_half},
        {"boundary_identity", r.boundary_identity},
        {"component_demand_ok", r.component_demand_ok},
        {"sandwich_ok", r.sandwich_ok}}},
      {"all_hold", r.AllHold()},
  };
}

Json ToJson(const DeliveryTrace& trace) {
  Json messages = Json::array();
  for (const MessageTrace& m : trace.messages) {
    Json parts = Json::array();
    for (const PathFlow& p : m.parts) {
      parts.push_back({{"source", p.source}, {"bits", static_cast<std::int64_t>(p.rate)}});
    }
    messages.push_back({{"caches", m.caches},
                        {"dest", m.dest},
                        {"size", m.size},
                        {"parts", parts},
                        {"edge_bits", m.edge_bits},
                        {"conserved", m.conserved},
                        {"complete", m.complete}});
  }
  return {{"phi", trace.phi},
          {"hops", trace.hops},
          {"edge_bits", trace.edge_bits},
          {"flow", ToJson(trace.flow)},
          {"messages", messages},
          {"all_complete", trace.AllComplete()},
          {"all_conserved", trace.AllConserved()}};
}

Json ToJson(const LPInstance& instance) {
  Json rows = Json::array();
  for (const LPRow& row : instance.rows) {
    Json terms = Json::array();
    for (const auto& [var, coef] : row.terms) terms.push_back({var, coef});
    const char* sense = row.sense == RowSense::kLessEqual      ? "<="
                        : row.sense == RowSense::kGreaterEqual ? ">="
                                                               : "=";
    rows.push_back({{"terms", terms}, {"sense", sense}, {"rhs", row.rhs}});
  }
  return {{"maximize", instance.maximize}, {"objective", instance.objective}, {"rows", rows}};
}

LPInstance LPFromJson(const Json& value) {
  LPInstance lp;
  lp.maximize = Field<bool>(value, "maximize");
  for (double c : Field<std::vector<double>>(value, "objective")) lp.AddVariable(c);
  for (const Json& row : value.at("rows")) {
    std::vector<std::pair<int, double>> terms;
    for (const Json& t : row.at("terms")) terms.emplace_back(t[0].get<int>(), t[1].get<double>());
    const std::string sense = Field<std::string>(row, "sense");
    RowSense s;
    if (sense == "<=") {
      s = RowSense::kLessEqual;
    } else if (sense == ">=") {
      s = RowSense::kGreaterEqual;
    } else if (sense == "=") {
      s = RowSense::kEqual;
    } else {
      throw std::invalid_argument("unknown row sense " + sense);
    }
    lp.AddRow(std::move(terms), s, Field<double>(row, "rhs"));
  }
  lp.Validate();
  return lp;
}

}  // namespace cachecap
