#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "support/support.hpp"
#include "tetherplan/errors.hpp"

using namespace tetherplan;
using namespace tetherplan::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tetherplan_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const json& j) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p;
  }

  int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "tetherplan");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  json scenario(const std::string& map, Cell base, double L, std::vector<Cell> goals, const char* policy = "skip") {
    json g = json::array();
    for (Cell c : goals) g.push_back({c.x, c.y});
    return {{"map", std::string(TETHERPLAN_FIXTURE_DIR) + "/" + map},
            {"radius", 0},
            {"base", {base.x, base.y}},
            {"tether_length", L},
            {"goals", g},
            {"on_unreachable", policy}};
  }

  fs::path dir_;
};

}  // namespace

TEST(Scenario, ParsesAndResolvesMapPath) {
  const json j = {{"map", "maps/a.txt"}, {"base", {1, 2}}, {"tether_length", 30.5}, {"goals", {{3, 4}, {5, 6}}},
                  {"on_unreachable", "fail"}};
  const Scenario s = parse_scenario(j, "/data");
  EXPECT_EQ(s.map, fs::path("/data/maps/a.txt"));
  EXPECT_EQ(s.base, (Cell{1, 2}));
  EXPECT_DOUBLE_EQ(s.tether_length, 30.5);
  EXPECT_DOUBLE_EQ(s.radius, 0.0);
  ASSERT_EQ(s.goals.size(), 2u);
  EXPECT_EQ(s.goals[1], (Cell{5, 6}));
  EXPECT_EQ(s.on_unreachable, OnUnreachable::Fail);
}

TEST(Scenario, RejectsBadFields) {
  const json good = {{"map", "a.txt"}, {"base", {1, 2}}, {"tether_length", 3.0}};
  EXPECT_NO_THROW(parse_scenario(good, "."));
  for (const char* key : {"map", "base", "tether_length"}) {
    json j = good;
    j.erase(key);
    EXPECT_THROW(parse_scenario(j, "."), FormatError) << key;
  }
  auto with = [&](const char* key, json v) {
    json j = good;
    j[key] = std::move(v);
    return j;
  };
  EXPECT_THROW(parse_scenario(with("tether_length", 0.0), "."), FormatError);
  EXPECT_THROW(parse_scenario(with("radius", -1.0), "."), FormatError);
  EXPECT_THROW(parse_scenario(with("base", {1}), "."), FormatError);
  EXPECT_THROW(parse_scenario(with("goals", {{1.5, 2}}), "."), FormatError);
  EXPECT_THROW(parse_scenario(with("on_unreachable", "maybe"), "."), FormatError);
  EXPECT_THROW(parse_scenario(json::array(), "."), FormatError);
}

TEST(RenderSvg, MapOnlyWhenNothingPlanned) {
  const GridWorld w = tetherplan::testing::fixture("wall.txt");
  const std::string svg = render_svg(w, Drawing{{1, 1}, {}, {}, std::nullopt});
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("fill=\"#808080\""), std::string::npos);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
}

TEST(RenderSvg, ObstacleRunsCoverEveryBlockedCell) {
  const GridWorld w = tetherplan::testing::random_obstacle_map(30, 20, 6, 1, 4, 3);
  const std::string svg = render_svg(w, Drawing{});
  const std::size_t scale = std::stoul(svg.substr(svg.find("width=\"") + 7)) / 30;
  std::size_t covered = 0;
  for (std::size_t at = svg.find("fill=\"#808080\""); at != std::string::npos; at = svg.find("fill=\"#808080\"", at + 1)) {
    const std::size_t rect = svg.rfind("<rect", at);
    const std::size_t wpos = svg.find("width=\"", rect) + 7;
    covered += std::stoul(svg.substr(wpos)) / scale;
  }
  EXPECT_EQ(covered, static_cast<std::size_t>(w.width() * w.height()) - w.free_count());
}

TEST_F(CliTest, TpOnEmptyMapIsStraight) {
  const auto s = write("s.json", scenario("empty.txt", {1, 1}, 40.0, {{15, 12}}));
  ASSERT_EQ(invoke({"tp", "--scenario", s.string(), "--out", (dir_ / "r.json").string(), "--svg",
                    (dir_ / "r.svg").string()}),
            0);
  const json r = json::parse(slurp(dir_ / "r.json"));
  EXPECT_EQ(r["status"], "ok");
  EXPECT_EQ(r["path"], json::parse("[[1,1],[15,12]]"));
  EXPECT_NEAR(r["total_length"].get<double>(), std::hypot(14.0, 11.0), 1e-12);
  for (const char* k : {"gcp_ms", "ups_ms", "combinatorial_ms", "total_ms"}) EXPECT_TRUE(r["timings_ms"].contains(k)) << k;
  const std::string svg = slurp(dir_ / "r.svg");
  std::size_t blue = 0;
  for (std::size_t at = svg.find("stroke=\"blue\""); at != std::string::npos; at = svg.find("stroke=\"blue\"", at + 1)) ++blue;
  EXPECT_EQ(blue, 1u);
}

TEST_F(CliTest, SvgIsDeterministicAndRoundTrips) {
  const auto s = write("s.json", scenario("wall.txt", {1, 1}, 40.0, {{16, 7}, {3, 3}, {12, 1}}));
  for (const char* run_name : {"a", "b"}) {
    ASSERT_EQ(invoke({"ttsp", "--scenario", s.string(), "--out", (dir_ / (std::string(run_name) + ".json")).string(),
                      "--svg", (dir_ / (std::string(run_name) + ".svg")).string()}),
              0);
  }
  const std::string svg = slurp(dir_ / "a.svg");
  EXPECT_EQ(svg, slurp(dir_ / "b.svg"));
  const json result = json::parse(slurp(dir_ / "a.json"));
  const GridWorld world = load_world(load_scenario(s));
  EXPECT_EQ(render_svg(world, drawing_from_result(result)), svg);
}

TEST_F(CliTest, StrictUnreachableExitsTwo) {
  const auto s = write("s.json", scenario("wall.txt", {1, 1}, 30.0, {{5, 4}, {3, 3}}));
  const std::string out = (dir_ / "r.json").string();
  EXPECT_EQ(invoke({"tmv", "--scenario", s.string(), "--on-unreachable", "fail", "--out", out}), 2);
  EXPECT_EQ(json::parse(slurp(out))["status"], "unreachable");
  EXPECT_EQ(invoke({"tmv", "--scenario", s.string(), "--out", out}), 0);
  const json r = json::parse(slurp(out));
  EXPECT_EQ(r["skipped"], json::parse("[[5,4]]"));
  EXPECT_TRUE(r["per_goal"][0]["chosen_index"].is_null());
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(invoke({}), 1);
  EXPECT_EQ(invoke({"fly"}), 1);
  EXPECT_EQ(invoke({"tp", "--scenario", (dir_ / "missing.json").string()}), 1);
  const auto bad = write("bad.json", {{"map", "x.txt"}});
  EXPECT_EQ(invoke({"tp", "--scenario", bad.string()}), 1);
  const auto outside = write("o.json", scenario("wall.txt", {1, 1}, 30.0, {{40, 4}}));
  EXPECT_EQ(invoke({"tp", "--scenario", outside.string(), "--out", (dir_ / "r.json").string()}), 1);
}

TEST_F(CliTest, VerifiersReportCleanRuns) {
  const auto s = write("s.json", scenario("single15.txt", {1, 1}, 30.0, {{13, 13}, {10, 7}}));
  const std::string out = (dir_ / "r.json").string();
  ASSERT_EQ(invoke({"verify-convexity", "--scenario", s.string(), "--samples", "150", "--seed", "7", "--out", out}), 0);
  json r = json::parse(slurp(out));
  EXPECT_EQ(r["pairs"], 150);
  EXPECT_EQ(r["seed"], 7);
  EXPECT_TRUE(r["violations"].empty());

  ASSERT_EQ(invoke({"verify-oracle", "--scenario", s.string(), "--out", out}), 0);
  r = json::parse(slurp(out));
  EXPECT_EQ(r["disagreements"], 0);
  EXPECT_EQ(r["goals"].size(), 2u);

  ASSERT_EQ(invoke({"workspace-stats", "--scenario", s.string(), "--out", out}), 0);
  r = json::parse(slurp(out));
  EXPECT_GT(r["workspace_nodes"].get<std::size_t>(), r["cfree_cells"].get<std::size_t>());
  EXPECT_EQ(r["goals"][0]["n_configs"], 2);
}

TEST_F(CliTest, ReconfigureReportsRequiredTether) {
  const auto s = write("s.json", scenario("wall.txt", {1, 1}, 30.0, {{3, 3}, {10, 1}}));
  const std::string out = (dir_ / "r.json").string();
  ASSERT_EQ(invoke({"reconfigure", "--scenario", s.string(), "--out", out}), 0);
  const json r = json::parse(slurp(out));
  EXPECT_EQ(r["path"].front(), json::parse("[3,3]"));
  EXPECT_EQ(r["path"].back(), json::parse("[10,1]"));
  EXPECT_LE(r["max_induced_tether"].get<double>(), 30.0);
  EXPECT_EQ(invoke({"reconfigure", "--scenario", s.string(), "--from-config", "99", "--out", out}), 1);
}
