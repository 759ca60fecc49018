#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "cachecap/harness.h"
#include "cachecap/json_io.h"

namespace cachecap {
namespace {

TEST(JsonIo, PlacementRoundTrip) {
  const NodePlacement p = GeneratePlacement(16, 42);
  const NodePlacement q = PlacementFromJson(ToJson(p));
  ASSERT_EQ(q.n, 16);
  EXPECT_EQ(q.seed, 42u);
  for (int i = 0; i < 16; ++i) {
    EXPECT_EQ(q.coords[i].x, p.coords[i].x);
    EXPECT_EQ(q.coords[i].y, p.coords[i].y);
  }
  EXPECT_THROW(PlacementFromJson(Json{{"n", 2}, {"coords", Json::array()}}), std::invalid_argument);
}

TEST(JsonIo, TreeRoundTrip) {
  const TreeGraph tree = TreeGraph::Build(GeneratePlacement(256, 3), 3.0);
  const Json j = ToJson(tree);
  EXPECT_EQ(j["vertices"].size(), static_cast<std::size_t>(tree.num_vertices()));
  EXPECT_EQ(j["edges"].size(), static_cast<std::size_t>(tree.num_edges()));
  const TreeGraph back = TreeFromJson(j);
  ASSERT_EQ(back.num_vertices(), tree.num_vertices());
  for (int v = 0; v < tree.num_vertices(); ++v) {
    EXPECT_EQ(back.vertex(v).parent, tree.vertex(v).parent);
    EXPECT_EQ(back.vertex(v).node, tree.vertex(v).node);
  }
  for (int e = 0; e < tree.num_edges(); ++e) EXPECT_EQ(back.capacity(e), tree.capacity(e));
  Json tampered = j;
  tampered["edges"][0]["capacity"] = 123.0;
  EXPECT_THROW(TreeFromJson(tampered), std::invalid_argument);
}

TEST(JsonIo, TrafficAndSizesRoundTrip) {
  std::mt19937_64 rng(6);
  const CachingTraffic t = RandomTraffic(16, rng);
  const CachingTraffic back = TrafficFromJson(ToJson(t), 16);
  EXPECT_EQ(back.entries(), t.entries());
  EXPECT_THROW(TrafficFromJson(Json::array({{{"caches", {20}}, {"dest", 1}, {"rate", 1.0}}}), 16),
               std::invalid_argument);

  SizeMap sizes;
  for (const auto& [key, rate] : t.entries()) sizes[key] = 77;
  EXPECT_EQ(SizesFromJson(ToJson(sizes), 16), sizes);
}

TEST(JsonIo, LPRoundTrip) {
  std::mt19937_64 rng(8);
  const LPInstance lp = RandomSmallLP(rng, 4, 4);
  const LPInstance back = LPFromJson(ToJson(lp));
  EXPECT_EQ(back.maximize, lp.maximize);
  ASSERT_EQ(back.num_rows(), lp.num_rows());
  const LPSolution a = SolveLP(lp), b = SolveLP(back);
  EXPECT_EQ(a.status, b.status);
  if (a.status == LPStatus::kOptimal) EXPECT_EQ(a.objective, b.objective);
}

TEST(JsonIo, PhiResultEncodesInfinity) {
  const TreeGraph tree = TreeGraph::FromLeafCells(4, 4.0, {1, 1, 1, 1});
  CachingTraffic t(4);
  t.Add({1}, 1, 1.0);
  const Json j = ToJson(Phi(tree, t));
  EXPECT_TRUE(j["phi"].is_null());
  EXPECT_TRUE(j["infinite"].get<bool>());
  EXPECT_TRUE(NumberOrNull(INFINITY).is_null());
  EXPECT_EQ(NumberOrNull(2.5).get<double>(), 2.5);
}

TEST(JsonIo, FileRoundTrip) {
  const std::filesystem::path path = std::filesystem::temp_directory_path() / "cachecap_json_io_test.json";
  const Json value = ToJson(GeneratePlacement(4, 1));
  WriteJsonFile(path.string(), value);
  EXPECT_EQ(ReadJsonFile(path.string()), value);
  std::filesystem::remove(path);
  EXPECT_THROW(ReadJsonFile(path.string()), std::invalid_argument);
}

}  // namespace
}  // namespace cachecap
