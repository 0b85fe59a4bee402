#include <fstream>

#include "cli.hpp"
#include "tetherplan/errors.hpp"

namespace tetherplan::cli {

using nlohmann::json;

namespace {

Cell cell_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw FormatError(std::string(what) + ": expected [x, y]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

Polyline polyline_from(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("expected a non-empty list of cells");
  std::vector<Cell> pts;
  for (const auto& c : j) pts.push_back(cell_from(c, "polyline vertex"));
  return Polyline(std::move(pts));
}

const json& required(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("scenario: missing key '") + key + "'");
  return j.at(key);
}

}  // namespace

Scenario parse_scenario(const json& j, const std::filesystem::path& dir) {
  if (!j.is_object()) throw FormatError("scenario: expected an object");
  Scenario s;
  try {
    const std::filesystem::path map = required(j, "map").get<std::string>();
    s.map = map.is_absolute() ? map : dir / map;
    s.radius = j.value("radius", 0.0);
    s.base = cell_from(required(j, "base"), "base");
    s.tether_length = required(j, "tether_length").get<double>();
    for (const auto& g : j.value("goals", json::array())) s.goals.push_back(cell_from(g, "goal"));
    const std::string policy = j.value("on_unreachable", "skip");
    if (policy == "skip") {
      s.on_unreachable = OnUnreachable::Skip;
    } else if (policy == "fail") {
      s.on_unreachable = OnUnreachable::Fail;
    } else {
      throw FormatError("scenario: on_unreachable must be 'skip' or 'fail'");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("scenario: ") + e.what());
  }
  if (!(s.tether_length > 0.0)) throw FormatError("scenario: tether_length must be positive");
  if (s.radius < 0.0) throw FormatError("scenario: radius must be non-negative");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return parse_scenario(j, path.parent_path());
}

GridWorld load_world(const Scenario& s) {
  GridWorld world = GridWorld::load_file(s.map).inflated(s.radius);
  auto check = [&](Cell c, const char* what) {
    if (!world.in_bounds(c)) {
      throw FormatError(std::string(what) + " (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                        ") is outside the map");
    }
  };
  check(s.base, "base");
  for (Cell g : s.goals) check(g, "goal");
  return world;
}

json to_json(Cell c) { return json::array({c.x, c.y}); }

json to_json(const Polyline& p) {
  json out = json::array();
  for (Cell c : p.points()) out.push_back(to_json(c));
  return out;
}

json to_json(const HSignature& s) {
  json out = json::array();
  for (const Letter& l : s.word()) out.push_back(json::array({l.component, l.sign}));
  return out;
}

json to_json(const Timings& t) {
  return {{"gcp_ms", t.gcp_ms}, {"ups_ms", t.ups_ms}, {"combinatorial_ms", t.combinatorial_ms}, {"total_ms", t.total_ms}};
}

json solution_json(const Scenario& s, const Solution& solution) {
  json per_goal = json::array();
  for (const GoalChoice& g : solution.per_goal) {
    const bool chosen = g.chosen_index != kNotChosen;
    per_goal.push_back({{"goal", to_json(g.goal)},
                        {"n_configs", g.n_configs},
                        {"chosen_index", chosen ? json(g.chosen_index) : json(nullptr)},
                        {"tether_length", chosen ? json(g.tether_length) : json(nullptr)}});
  }
  json skipped = json::array();
  for (Cell c : solution.skipped) skipped.push_back(to_json(c));
  json tethers = json::array();
  for (const Configuration& c : solution.visited) tethers.push_back(to_json(c.tether));
  json goals = json::array();
  for (Cell g : s.goals) goals.push_back(to_json(g));

  return {{"status", "ok"},
          {"map", s.map.string()},
          {"base", to_json(s.base)},
          {"goals", goals},
          {"total_length", solution.total_length},
          {"path", to_json(solution.path)},
          {"per_goal", per_goal},
          {"skipped", skipped},
          {"tethers", tethers},
          {"ups_calls", solution.ups_calls},
          {"timings_ms", to_json(solution.timings)}};
}

Drawing drawing_from_result(const json& result) {
  Drawing d;
  try {
    d.base = cell_from(result.at("base"), "base");
    for (const auto& g : result.at("goals")) d.goals.push_back(cell_from(g, "goal"));
    for (const auto& t : result.value("tethers", json::array())) d.tethers.push_back(polyline_from(t));
    if (result.contains("path") && !result.at("path").is_null()) d.path = polyline_from(result.at("path"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("result: ") + e.what());
  }
  return d;
}

}  // namespace tetherplan::cli
