// JSON encodings of placements, trees, traffic, and solver outputs.
// Every loader throws std::invalid_argument on malformed input.

#ifndef CACHECAP_JSON_IO_H_
#define CACHECAP_JSON_IO_H_

#include <string>

#include <json.hpp>

#include "cachecap/channel.h"
#include "cachecap/cutbounds.h"
#include "cachecap/lp.h"
#include "cachecap/lpcore.h"
#include "cachecap/placement.h"
#include "cachecap/scheme.h"
#include "cachecap/traffic.h"
#include "cachecap/treegraph.h"

namespace cachecap {

using Json = nlohmann::json;

Json ReadJsonFile(const std::string& path);
// Pretty-printed with a trailing newline.
void WriteJsonFile(const std::string& path, const Json& value);

// {"n": int, "seed": int, "coords": [[x, y], ...]}
Json ToJson(const NodePlacement& placement);
NodePlacement PlacementFromJson(const Json& value);

Json ToJson(const RegularityReport& report);

// {"n", "alpha", "depth", "vertices": [{"id", "level", "cell", "parent",
// "node"}], "edges": [{"id", "child", "parent", "level", "capacity"}]}.
// Ordering follows vertex and edge ids.
Json ToJson(const TreeGraph& tree);
// Rebuilds from n, alpha and the level-L cells of the leaves' parents, then
// checks the listed capacities against the rebuilt tree.
TreeGraph TreeFromJson(const Json& value);

// [{"caches": [ids], "dest": id, "rate": r}, ...]
Json ToJson(const CachingTraffic& traffic);
CachingTraffic TrafficFromJson(const Json& value, int n);

// [{"caches", "dest", "size"}, ...]
SizeMap SizesFromJson(const Json& value, int n);
Json ToJson(const SizeMap& sizes);

Json ToJson(const FlowSolution& flow);
// {"phi", "infinite", "method", "flows", "loads"}; phi is null when infinite.
Json ToJson(const PhiResult& result);
// Directed duals: m_e per core edge and d_{u,w} per pair.
Json DualsToJson(const TreeGraph& tree, const DualSolution& duals);

Json ToJson(const CutSpec& cut);
Json ToJson(const RhoHat& rhohat);
Json ToJson(const SandwichReport& report);

Json ToJson(const DeliveryTrace& trace);

Json ToJson(const LPInstance& instance);
LPInstance LPFromJson(const Json& value);

// Finite doubles pass through; infinities become null.
Json NumberOrNull(double value);

}  // namespace cachecap

#endif  // CACHECAP_JSON_IO_H_
