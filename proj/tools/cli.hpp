#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tetherplan/gcp.hpp"
#include "tetherplan/gridmap.hpp"
#include "tetherplan/planner.hpp"

namespace tetherplan::cli {

struct Scenario {
  std::filesystem::path map;  // resolved against the scenario file's directory
  double radius = 0.0;
  Cell base;
  double tether_length = 0.0;
  std::vector<Cell> goals;
  OnUnreachable on_unreachable = OnUnreachable::Skip;
};

/// Throws FormatError on malformed JSON, missing keys, L <= 0, radius < 0.
Scenario parse_scenario(const nlohmann::json& j, const std::filesystem::path& dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Loads the map and inflates it by the radius. Throws FormatError if a cell is out of bounds.
GridWorld load_world(const Scenario& s);

/// Everything drawn in a rendering; recoverable from a result file.
struct Drawing {
  Cell base;
  std::vector<Cell> goals;
  std::vector<Polyline> tethers;
  std::optional<Polyline> path;
};

std::string render_svg(const GridWorld& world, const Drawing& drawing);

nlohmann::json to_json(Cell c);
nlohmann::json to_json(const Polyline& p);
nlohmann::json to_json(const HSignature& s);
nlohmann::json to_json(const Timings& t);

/// Result document for a planner run. `status` is "ok" or "unreachable".
nlohmann::json solution_json(const Scenario& s, const Solution& solution);
Drawing drawing_from_result(const nlohmann::json& result);

int run(int argc, char** argv);

}  // namespace tetherplan::cli
