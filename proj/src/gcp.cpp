#include "tetherplan/gcp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_map>
#include <vector>

#include <spdlog/spdlog.h>

#include "tetherplan/errors.hpp"
#include "tetherplan/shorten.hpp"

namespace tetherplan {

Configuration make_configuration(const GridWorld& world, Polyline tether) {
  Configuration c;
  c.base = tether.front();
  c.location = tether.back();
  c.tether_length = length(tether);
  c.signature = HSignature(crossings(world, tether.points()));
  c.tether = std::move(tether);
  return c;
}

Configuration home_configuration(const GridWorld& world, Cell base) {
  if (!world.is_cfree(base)) throw PreconditionError("home_configuration: base is not in C");
  return make_configuration(world, Polyline(base));
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double octile(Cell a, Cell b) {
  const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

struct State {
  std::uint32_t cell;
  WordTrie::Id word;
  double cost;
  std::uint32_t parent;
  bool settled;
};

}  // namespace

GcpResult gcp(const GridWorld& world, Cell base, std::span<const Cell> goals, double max_length) {
  if (!(max_length > 0.0)) throw PreconditionError("gcp: tether length must be positive");
  if (!world.is_cfree(base)) throw PreconditionError("gcp: base is not in C");

  GcpResult result;
  std::vector<Cell> targets;
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> goal_slots;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    result.goals.push_back({goals[i], false, {}});
    if (!world.is_cfree(goals[i])) {
      spdlog::debug("gcp: goal ({}, {}) is not in C", goals[i].x, goals[i].y);
      continue;
    }
    targets.push_back(goals[i]);
    goal_slots[static_cast<std::uint32_t>(world.index(goals[i]))].push_back(i);
  }
  if (targets.empty()) return result;

  const double budget = kGcpPruneFactor * max_length;
  auto heuristic = [&](Cell c) {
    double h = std::numeric_limits<double>::infinity();
    for (const Cell& t : targets) h = std::min(h, octile(c, t));
    return h;
  };

  // Crossing letters of every step out of every C cell, as [begin, end) into `letters`.
  constexpr int kDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
  constexpr int kDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  const std::size_t cells = static_cast<std::size_t>(world.width()) * static_cast<std::size_t>(world.height());
  std::vector<std::uint32_t> step_begin(cells * 8 + 1, 0);
  Word letters;
  for (std::size_t i = 0; i < cells; ++i) {
    const Cell from = world.cell_at(i);
    for (int d = 0; d < 8; ++d) {
      step_begin[i * 8 + static_cast<std::size_t>(d)] = static_cast<std::uint32_t>(letters.size());
      const Cell to{from.x + kDx[d], from.y + kDy[d]};
      if (world.is_cfree(from) && world.is_cfree(to)) append_crossings(world, from, to, letters);
    }
  }
  step_begin[cells * 8] = static_cast<std::uint32_t>(letters.size());

  WordTrie trie;
  std::vector<State> states;
  std::vector<std::vector<std::uint32_t>> at_cell(cells);
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  const auto base_index = static_cast<std::uint32_t>(world.index(base));
  states.push_back({base_index, WordTrie::kEmpty, 0.0, 0, false});
  at_cell[base_index].push_back(0);
  open.push({0.0, 0});

  std::vector<std::uint32_t> goal_hits;
  while (!open.empty()) {
    const auto [cost, id] = open.top();
    open.pop();
    State& s = states[id];
    if (s.settled || cost > s.cost) continue;
    s.settled = true;
    ++result.states_settled;
    if (goal_slots.count(s.cell)) goal_hits.push_back(id);

    const Cell from = world.cell_at(s.cell);
    const WordTrie::Id word = s.word;
    const std::size_t row = static_cast<std::size_t>(s.cell) * 8;
    for (int d = 0; d < 8; ++d) {
      const Cell to{from.x + kDx[d], from.y + kDy[d]};
      if (!world.is_cfree(to)) continue;
      const double c = cost + ((kDx[d] != 0 && kDy[d] != 0) ? kSqrt2 : 1.0);
      if (c > budget || c + heuristic(to) > budget + 1e-9) continue;
      const std::uint32_t lo = step_begin[row + static_cast<std::size_t>(d)];
      const std::uint32_t hi = step_begin[row + static_cast<std::size_t>(d) + 1];
      const WordTrie::Id w =
          lo == hi ? word : trie.append(word, std::span<const Letter>(letters.data() + lo, hi - lo));
      const auto cell = static_cast<std::uint32_t>(world.index(to));
      auto& slot = at_cell[cell];
      const auto it = std::find_if(slot.begin(), slot.end(), [&](std::uint32_t k) { return states[k].word == w; });
      if (it == slot.end()) {
        slot.push_back(static_cast<std::uint32_t>(states.size()));
        open.push({c, static_cast<std::uint32_t>(states.size())});
        states.push_back({cell, w, c, id, false});
      } else if (!states[*it].settled && c < states[*it].cost) {
        states[*it].cost = c;
        states[*it].parent = id;
        open.push({c, *it});
      }
    }
  }
  result.goal_states = goal_hits.size();

  // An 8-connected path can trace any free chord within this factor of its length, so a
  // goal state's grid cost bounds its taut length from below.
  const double octile_stretch = std::sqrt(4.0 - 2.0 * std::sqrt(2.0));
  for (const std::uint32_t id : goal_hits) {
    if (states[id].cost > octile_stretch * max_length * (1.0 + 1e-12)) continue;
    std::vector<Cell> path;
    for (std::uint32_t k = id;; k = states[k].parent) {
      path.push_back(world.cell_at(states[k].cell));
      if (k == 0) break;
    }
    std::reverse(path.begin(), path.end());
    TautTether taut = taut_tether(base, Polyline(std::move(path)), world);
    if (taut.length > max_length || is_self_crossing(taut.tether)) continue;
    Configuration config = make_configuration(world, std::move(taut.tether));
    for (const std::size_t slot : goal_slots[states[id].cell]) result.goals[slot].configurations.push_back(config);
  }

  for (auto& g : result.goals) {
    std::sort(g.configurations.begin(), g.configurations.end(), [](const Configuration& a, const Configuration& b) {
      if (a.tether_length != b.tether_length) return a.tether_length < b.tether_length;
      return a.signature < b.signature;
    });
    g.reachable = !g.configurations.empty();
  }
  spdlog::debug("gcp: settled {} states, {} at goals", result.states_settled, result.goal_states);
  return result;
}

}  // namespace tetherplan
