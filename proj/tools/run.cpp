#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli.hpp"
#include "tetherplan/errors.hpp"
#include "tetherplan/oracle.hpp"

namespace tetherplan::cli {

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kUnreachable = 2;

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Options {
  std::string scenario;
  std::string out;
  std::string svg;
  std::string on_unreachable;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::size_t from_config = 0;
  std::size_t to_config = 0;
};

void setup_logging() {
  auto logger = spdlog::get("tetherplan");
  if (!logger) logger = spdlog::stderr_color_mt("tetherplan");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::err);
  const char* env = std::getenv("TETHERPLAN_LOG");
  if (!env) return;
  const std::string level = env;
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::warn("TETHERPLAN_LOG={} not recognised, using 'error'", level);
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

void emit(const Options& o, const GridWorld& world, json result, const Drawing& drawing) {
  write_text(o.out, result.dump(2) + "\n");
  if (!o.svg.empty()) write_text(o.svg, render_svg(world, drawing));
}

Drawing scenario_drawing(const Scenario& s) { return {s.base, s.goals, {}, std::nullopt}; }

json timings(double total, double gcp = 0.0, double ups = 0.0, double combinatorial = 0.0) {
  return to_json(Timings{gcp, ups, combinatorial, total});
}

json unreachable_result(const Scenario& s, const std::string& reason, double total_ms) {
  json goals = json::array();
  for (Cell g : s.goals) goals.push_back(to_json(g));
  return {{"status", "unreachable"}, {"reason", reason},        {"map", s.map.string()},
          {"base", to_json(s.base)}, {"goals", goals},          {"path", nullptr},
          {"ups_calls", 0},          {"timings_ms", timings(total_ms)}};
}

int run_planner(const std::string& command, const Options& o, const Scenario& s, const GridWorld& world) {
  const Stopwatch clock;
  try {
    Solution solution;
    if (command == "tp") {
      if (s.goals.empty()) throw FormatError("tp: scenario has no goals");
      if (s.goals.size() > 1) spdlog::warn("tp: using the first of {} goals", s.goals.size());
      solution = tp(home_configuration(world, s.base), s.goals.front(), s.tether_length, world);
    } else if (command == "tmv") {
      solution = tmv(world, s.base, s.goals, s.tether_length, s.on_unreachable);
    } else {
      solution = ttsp(world, s.base, s.goals, s.tether_length, s.on_unreachable);
    }
    json result = solution_json(s, solution);
    spdlog::info("{}: length {:.3f}, {} UPS calls, {:.1f} ms", command, solution.total_length, solution.ups_calls,
                 solution.timings.total_ms);
    const Drawing drawing = drawing_from_result(result);
    emit(o, world, std::move(result), drawing);
    return kOk;
  } catch (const UnreachableError& e) {
    const bool strict = command != "tp" || s.on_unreachable == OnUnreachable::Fail;
    if (strict) std::cerr << command << ": " << e.what() << "\n";
    emit(o, world, unreachable_result(s, e.what(), clock.ms()), scenario_drawing(s));
    return strict ? kUnreachable : kOk;
  }
}

int run_reconfigure(const Options& o, const Scenario& s, const GridWorld& world) {
  if (s.goals.size() != 2) throw FormatError("reconfigure: scenario needs exactly two goals");
  const Stopwatch clock;
  const GcpResult configs = gcp(world, s.base, s.goals, s.tether_length);
  const double gcp_ms = clock.ms();
  const std::size_t pick[2] = {o.from_config, o.to_config};
  for (int k = 0; k < 2; ++k) {
    const auto& slice = configs.goals[static_cast<std::size_t>(k)].configurations;
    if (slice.empty()) {
      std::string msg = "goal " + std::to_string(k) + " has no admissible configuration";
      const bool strict = s.on_unreachable == OnUnreachable::Fail;
      if (strict) std::cerr << "reconfigure: " << msg << "\n";
      emit(o, world, unreachable_result(s, msg, clock.ms()), scenario_drawing(s));
      return strict ? kUnreachable : kOk;
    }
    if (pick[k] >= slice.size()) {
      throw FormatError("reconfigure: configuration index " + std::to_string(pick[k]) + " out of range (" +
                        std::to_string(slice.size()) + " available)");
    }
  }
  const Configuration& from = configs.goals[0].configurations[pick[0]];
  const Configuration& to = configs.goals[1].configurations[pick[1]];
  const Stopwatch ups;
  const Polyline motion = tr(from, to, world, s.tether_length);
  const double ups_ms = ups.ms();
  double max_induced = 0.0;
  for (const auto& [index, len] : induced_tether_profile(from, motion, world)) max_induced = std::max(max_induced, len);

  json result = {{"status", "ok"},
                 {"map", s.map.string()},
                 {"base", to_json(s.base)},
                 {"goals", json::array({to_json(s.goals[0]), to_json(s.goals[1])})},
                 {"from", {{"index", pick[0]}, {"tether_length", from.tether_length}, {"signature", to_json(from.signature)}}},
                 {"to", {{"index", pick[1]}, {"tether_length", to.tether_length}, {"signature", to_json(to.signature)}}},
                 {"total_length", length(motion)},
                 {"path", to_json(motion)},
                 {"tethers", json::array({to_json(from.tether), to_json(to.tether)})},
                 {"max_induced_tether", max_induced},
                 {"min_required_tether", min_required_tether(from, to)},
                 {"ups_calls", 1},
                 {"timings_ms", timings(clock.ms(), gcp_ms, ups_ms)}};
  const Drawing drawing = drawing_from_result(result);
  emit(o, world, std::move(result), drawing);
  return kOk;
}

int run_verify_convexity(const Options& o, const Scenario& s, const GridWorld& world) {
  const Stopwatch clock;
  const WorkspaceGraph graph = build_workspace(world, s.base, s.tether_length);
  const double workspace_ms = clock.ms();
  const ConvexityReport report = verify_convexity(graph, o.samples, o.seed);
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"from", to_json(v.from.tether)},
                          {"to", to_json(v.to.tether)},
                          {"motion", to_json(v.motion)},
                          {"max_induced", v.max_induced},
                          {"bound", v.bound}});
  }
  json t = timings(clock.ms());
  t["workspace_ms"] = workspace_ms;
  json result = {{"status", report.violations.empty() ? "ok" : "violations"},
                 {"seed", report.seed},
                 {"pairs", report.pairs},
                 {"workspace_nodes", graph.nodes().size()},
                 {"worst_excess", report.worst_excess},
                 {"violations", violations},
                 {"timings_ms", t}};
  emit(o, world, std::move(result), scenario_drawing(s));
  if (!report.violations.empty()) {
    std::cerr << "verify-convexity: " << report.violations.size() << " violations in " << report.pairs << " pairs\n";
    return kUsage;
  }
  return kOk;
}

int run_verify_oracle(const Options& o, const Scenario& s, const GridWorld& world) {
  const Stopwatch clock;
  const WorkspaceGraph graph = build_workspace(world, s.base, s.tether_length);
  const double workspace_ms = clock.ms();
  const Configuration home = home_configuration(world, s.base);
  Timings planner;
  double oracle_ms = 0.0;
  std::size_t disagreements = 0;
  json goals = json::array();
  for (Cell goal : s.goals) {
    json entry = {{"goal", to_json(goal)}};
    std::optional<Solution> planned;
    try {
      planned = tp(home, goal, s.tether_length, world);
      planner.gcp_ms += planned->timings.gcp_ms;
      planner.ups_ms += planned->timings.ups_ms;
      planner.combinatorial_ms += planned->timings.combinatorial_ms;
      planner.total_ms += planned->timings.total_ms;
    } catch (const UnreachableError&) {
    }
    std::optional<OracleTpResult> reference;
    const Stopwatch oracle_clock;
    try {
      reference = oracle_tp(graph, home, goal);
    } catch (const UnreachableError&) {
    }
    oracle_ms += oracle_clock.ms();

    bool agree = planned.has_value() == reference.has_value();
    if (planned && reference) {
      agree = std::abs(planned->total_length - reference->length) <= 1e-6 &&
              planned->visited.back().signature == reference->goal_configuration.signature;
      entry["tp_length"] = planned->total_length;
      entry["oracle_length"] = reference->length;
    }
    entry["reachable"] = reference.has_value();
    entry["agree"] = agree;
    if (!agree) ++disagreements;
    goals.push_back(entry);
  }
  json t = timings(clock.ms(), planner.gcp_ms, planner.ups_ms, planner.combinatorial_ms);
  t["tp_ms"] = planner.total_ms;
  t["workspace_ms"] = workspace_ms;
  t["oracle_ms"] = oracle_ms;
  json result = {{"status", disagreements == 0 ? "ok" : "disagreement"},
                 {"workspace_nodes", graph.nodes().size()},
                 {"goals", goals},
                 {"disagreements", disagreements},
                 {"timings_ms", t}};
  emit(o, world, std::move(result), scenario_drawing(s));
  if (disagreements > 0) {
    std::cerr << "verify-oracle: " << disagreements << " of " << s.goals.size() << " goals disagree\n";
    return kUsage;
  }
  return kOk;
}

int run_workspace_stats(const Options& o, const Scenario& s, const GridWorld& world) {
  const Stopwatch clock;
  const WorkspaceGraph graph = build_workspace(world, s.base, s.tether_length);
  const double workspace_ms = clock.ms();
  std::size_t max_classes = 0;
  {
    std::vector<std::size_t> per_cell(static_cast<std::size_t>(world.width()) * static_cast<std::size_t>(world.height()));
    for (const auto& n : graph.nodes()) max_classes = std::max(max_classes, ++per_cell[n.cell]);
  }
  Drawing drawing = scenario_drawing(s);
  json goals = json::array();
  for (Cell goal : s.goals) {
    const auto configs = workspace_configurations(graph, goal);
    json lengths = json::array();
    for (const auto& c : configs) {
      lengths.push_back(c.tether_length);
      drawing.tethers.push_back(c.tether);
    }
    goals.push_back({{"goal", to_json(goal)}, {"n_configs", configs.size()}, {"tether_lengths", lengths}});
  }
  json t = timings(clock.ms());
  t["workspace_ms"] = workspace_ms;
  json result = {{"status", "ok"},
                 {"workspace_nodes", graph.nodes().size()},
                 {"cfree_cells", world.cfree_count()},
                 {"max_classes_per_cell", max_classes},
                 {"goals", goals},
                 {"timings_ms", t}};
  emit(o, world, std::move(result), drawing);
  return kOk;
}

int dispatch(const std::string& command, const Options& o) {
  Scenario s = load_scenario(o.scenario);
  if (o.on_unreachable == "fail") s.on_unreachable = OnUnreachable::Fail;
  if (o.on_unreachable == "skip") s.on_unreachable = OnUnreachable::Skip;
  const GridWorld world = load_world(s);
  spdlog::debug("{}: {}x{} map, radius {}, L {}", command, world.width(), world.height(), s.radius, s.tether_length);
  if (command == "tp" || command == "tmv" || command == "ttsp") return run_planner(command, o, s, world);
  if (command == "reconfigure") return run_reconfigure(o, s, world);
  if (command == "verify-convexity") return run_verify_convexity(o, s, world);
  if (command == "verify-oracle") return run_verify_oracle(o, s, world);
  return run_workspace_stats(o, s, world);
}

}  // namespace

int run(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Tethered robot path planning on occupancy grids"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Result JSON file (default: stdout)");
    sub->add_option("--svg", o.svg, "SVG rendering");
    return sub;
  };
  for (const char* name : {"tp", "tmv", "ttsp"}) {
    common(app.add_subcommand(name, std::string("Run ") + name))
        ->add_option("--on-unreachable", o.on_unreachable, "Override the scenario policy")
        ->check(CLI::IsMember({"skip", "fail"}));
  }
  auto* reconfigure = common(app.add_subcommand("reconfigure", "Shortest motion between configurations at two goals"));
  reconfigure->add_option("--from-config", o.from_config, "Configuration index at the first goal");
  reconfigure->add_option("--to-config", o.to_config, "Configuration index at the second goal");
  reconfigure->add_option("--on-unreachable", o.on_unreachable)->check(CLI::IsMember({"skip", "fail"}));
  auto* convexity = common(app.add_subcommand("verify-convexity", "Sample workspace pairs and check tether lengths"));
  convexity->add_option("--samples", o.samples, "Configuration pairs")->check(CLI::PositiveNumber);
  convexity->add_option("--seed", o.seed);
  common(app.add_subcommand("verify-oracle", "Compare tp with the workspace oracle at every goal"));
  common(app.add_subcommand("workspace-stats", "Build the workspace and count configurations"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, o);
  } catch (const FormatError& e) {
    std::cerr << command << ": " << e.what() << "\n";
  } catch (const EmptyWorldError& e) {
    std::cerr << command << ": " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    std::cerr << command << ": " << e.what() << "\n";
  } catch (const BudgetError& e) {
    std::cerr << command << ": " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace tetherplan::cli
