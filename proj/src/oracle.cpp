#include "tetherplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <string>

#include <spdlog/spdlog.h>

#include "tetherplan/errors.hpp"
#include "tetherplan/planner.hpp"
#include "tetherplan/shorten.hpp"

namespace tetherplan {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

std::uint64_t key(std::uint32_t cell, WordTrie::Id word) { return (static_cast<std::uint64_t>(word) << 32) | cell; }

// True when the tether a->b->p may be replaced by the chord a->p.
class Chord {
 public:
  explicit Chord(const GridWorld& world) : world_(world) {}

  bool shortcuts(Cell a, Cell b, Cell p) {
    if (!segment_free(world_, a, p, Mask::CFree)) return false;
    bent_.clear();
    append_crossings(world_, a, b, bent_);
    append_crossings(world_, b, p, bent_);
    straight_.clear();
    append_crossings(world_, a, p, straight_);
    return reduce(bent_) == straight_;
  }

 private:
  const GridWorld& world_;
  Word bent_, straight_;
};

// Drags a taut-ish tether, kept as a vertex stack, to each new robot cell.
class DraggedTether {
 public:
  DraggedTether(const GridWorld& world, const Polyline& start) : chord_(world), points_(start.points()) {
    length_ = tetherplan::length(start);
  }

  void move_to(Cell p) {
    while (points_.size() >= 2) {
      const Cell a = points_[points_.size() - 2], b = points_.back();
      if (!chord_.shortcuts(a, b, p)) break;
      points_.pop_back();
      length_ -= distance(a, b);
    }
    if (points_.back() != p) {
      length_ += distance(points_.back(), p);
      points_.push_back(p);
    }
  }

  double length() const { return length_; }
  Polyline tether() const { return Polyline(points_); }

 private:
  Chord chord_;
  std::vector<Cell> points_;
  double length_ = 0.0;
};

Configuration exact_configuration(const WorkspaceGraph& graph, std::size_t node) {
  TautTether taut = taut_tether(graph.base(), graph.raw_path(node), graph.world());
  Configuration c = make_configuration(graph.world(), std::move(taut.tether));
  return c;
}

bool admissible(const WorkspaceGraph& graph, const Configuration& c) {
  return c.tether_length <= graph.max_length() && !is_self_crossing(c.tether);
}

bool config_less(const Configuration& a, const Configuration& b) {
  if (a.tether_length != b.tether_length) return a.tether_length < b.tether_length;
  return a.signature < b.signature;
}

struct Search {
  std::vector<double> cost;
  std::vector<std::uint32_t> parent;
  std::vector<std::size_t> order;  // settled nodes
};

// Dijkstra over workspace nodes, stopping early once `stop` is settled.
Search workspace_dijkstra(const WorkspaceGraph& graph, std::size_t source, std::size_t stop = kNone) {
  const auto n = graph.nodes().size();
  Search s{std::vector<double>(n, std::numeric_limits<double>::infinity()), std::vector<std::uint32_t>(n, kNone), {}};
  std::vector<char> done(n, 0);
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  s.cost[source] = 0.0;
  open.push({0.0, static_cast<std::uint32_t>(source)});
  while (!open.empty()) {
    const auto [c, id] = open.top();
    open.pop();
    if (done[id]) continue;
    done[id] = 1;
    s.order.push_back(id);
    if (id == stop) break;
    const Cell from = graph.cell(id);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const auto next = graph.step(id, {from.x + dx, from.y + dy});
        if (!next || done[*next]) continue;
        const double nc = c + ((dx != 0 && dy != 0) ? kSqrt2 : 1.0);
        if (nc < s.cost[*next]) {
          s.cost[*next] = nc;
          s.parent[*next] = id;
          open.push({nc, static_cast<std::uint32_t>(*next)});
        }
      }
    }
  }
  return s;
}

Polyline trace(const WorkspaceGraph& graph, const Search& s, std::size_t node) {
  std::vector<Cell> path;
  for (std::uint32_t k = static_cast<std::uint32_t>(node); k != kNone; k = s.parent[k]) path.push_back(graph.cell(k));
  std::reverse(path.begin(), path.end());
  return Polyline(std::move(path));
}

// Admissible configurations drawn uniformly from the workspace nodes.
std::vector<Configuration> sample_configurations(const WorkspaceGraph& graph, std::size_t count, std::mt19937_64& rng) {
  std::vector<Configuration> out;
  std::uniform_int_distribution<std::size_t> pick(0, graph.nodes().size() - 1);
  for (std::size_t tries = 0; out.size() < count && tries < 20 * count; ++tries) {
    Configuration c = exact_configuration(graph, pick(rng));
    if (admissible(graph, c)) out.push_back(std::move(c));
  }
  return out;
}

Polyline densify(const Polyline& p) {
  std::vector<Cell> out{p.front()};
  for (std::size_t i = 1; i < p.size(); ++i) {
    const auto seg = raster_segment(p[i - 1], p[i]);
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
  return Polyline(std::move(out));
}

}  // namespace

std::optional<std::size_t> WorkspaceGraph::lookup(std::uint32_t cell, WordTrie::Id word) const {
  const auto it = lookup_.find(key(cell, word));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> WorkspaceGraph::find(Cell cell, const HSignature& signature) const {
  if (!world_->in_bounds(cell)) return std::nullopt;
  const WordTrie::Id w = trie_.append(WordTrie::kEmpty, signature.word());
  return lookup(static_cast<std::uint32_t>(world_->index(cell)), w);
}

std::optional<std::size_t> WorkspaceGraph::step(std::size_t node, Cell to) const {
  if (!world_->is_cfree(to)) return std::nullopt;
  Word letters;
  append_crossings(*world_, cell(node), to, letters);
  return lookup(static_cast<std::uint32_t>(world_->index(to)), trie_.append(nodes_[node].word, letters));
}

Polyline WorkspaceGraph::raw_path(std::size_t node) const {
  std::vector<Cell> path;
  for (std::uint32_t k = static_cast<std::uint32_t>(node);; k = nodes_[k].parent) {
    path.push_back(world_->cell_at(nodes_[k].cell));
    if (k == 0) break;
  }
  std::reverse(path.begin(), path.end());
  return Polyline(std::move(path));
}

WorkspaceGraph build_workspace(const GridWorld& world, Cell base, double max_length, std::size_t node_cap) {
  if (!(max_length >= 0.0)) throw PreconditionError("build_workspace: tether length must be non-negative");
  if (!world.is_cfree(base)) throw PreconditionError("build_workspace: base is not in C");

  WorkspaceGraph g;
  g.world_ = &world;
  g.base_ = base;
  g.max_length_ = max_length;

  const auto base_index = static_cast<std::uint32_t>(world.index(base));
  g.nodes_.push_back({base_index, WordTrie::kEmpty, kNone, 0.0});
  g.lookup_.emplace(key(base_index, WordTrie::kEmpty), 0);

  const double budget = kGcpPruneFactor * max_length;
  std::vector<char> settled{0};
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({0.0, 0});

  Word step;
  while (!open.empty()) {
    const auto [cost, id] = open.top();
    open.pop();
    if (settled[id] || cost > g.nodes_[id].cost) continue;
    settled[id] = 1;
    const Cell here = world.cell_at(g.nodes_[id].cell);
    const WordTrie::Id word = g.nodes_[id].word;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell to{here.x + dx, here.y + dy};
        if (!world.is_cfree(to)) continue;
        const double c = cost + ((dx != 0 && dy != 0) ? kSqrt2 : 1.0);
        if (c > budget) continue;
        step.clear();
        append_crossings(world, here, to, step);
        const WordTrie::Id w = g.trie_.append(word, step);
        const auto cell = static_cast<std::uint32_t>(world.index(to));
        const auto [it, fresh] = g.lookup_.emplace(key(cell, w), static_cast<std::uint32_t>(g.nodes_.size()));
        if (fresh) {
          if (g.nodes_.size() >= node_cap) {
            throw BudgetError("build_workspace: more than " + std::to_string(node_cap) + " nodes");
          }
          g.nodes_.push_back({cell, w, id, c});
          settled.push_back(0);
          open.push({c, it->second});
        } else if (!settled[it->second] && c < g.nodes_[it->second].cost) {
          g.nodes_[it->second].cost = c;
          g.nodes_[it->second].parent = id;
          open.push({c, it->second});
        }
      }
    }
  }
  spdlog::debug("build_workspace: {} nodes", g.nodes_.size());
  return g;
}

std::vector<Configuration> workspace_configurations(const WorkspaceGraph& graph, Cell cell) {
  std::vector<Configuration> out;
  if (!graph.world().is_cfree(cell)) return out;
  const auto index = static_cast<std::uint32_t>(graph.world().index(cell));
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    if (graph.nodes()[i].cell != index) continue;
    Configuration c = exact_configuration(graph, i);
    if (admissible(graph, c)) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), config_less);
  return out;
}

OracleTpResult oracle_tp(const WorkspaceGraph& graph, const Configuration& start, Cell goal) {
  if (start.base != graph.base()) throw PreconditionError("oracle_tp: start has a different base");
  const auto source = graph.find(start.location, start.signature);
  if (!source) throw PreconditionError("oracle_tp: start is not a workspace node");

  const Search s = workspace_dijkstra(graph, *source);
  const auto goal_index = graph.world().in_bounds(goal) ? graph.world().index(goal) : kNone;

  std::optional<OracleTpResult> best;
  for (const std::size_t id : s.order) {
    if (graph.nodes()[id].cell != goal_index) continue;
    Configuration config = exact_configuration(graph, id);
    if (!admissible(graph, config)) continue;
    OracleTpResult r;
    r.raw = trace(graph, s, id);
    r.shortened = shorten(r.raw, graph.world(), Mask::CFree);
    r.length = length(r.shortened);
    r.goal_configuration = std::move(config);
    if (!best || r.length < best->length - 1e-9 ||
        (r.length <= best->length + 1e-9 && r.goal_configuration.signature < best->goal_configuration.signature)) {
      best = std::move(r);
    }
  }
  if (!best) throw UnreachableError("oracle_tp: no admissible configuration at the goal is reachable");
  best->nodes_settled = s.order.size();
  return *best;
}

ConvexityReport verify_convexity(const WorkspaceGraph& graph, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConvexityReport report;
  report.seed = seed;
  const auto configs = sample_configurations(graph, 2 * samples, rng);
  const double cap = 1.001 * graph.max_length();
  for (std::size_t i = 0; i + 1 < configs.size(); i += 2) {
    const Configuration& c1 = configs[i];
    const Configuration& c2 = configs[i + 1];
    const Polyline motion = densify(tr(c1, c2, graph.world(), graph.max_length()));
    const double bound = std::min(std::max(c1.tether_length, c2.tether_length) + kGridEpsilon, cap);

    // Dragging only shortcuts within the class, so it can overshoot but never undercut; recheck overshoots.
    DraggedTether dragged(graph.world(), c1.tether);
    double worst = c1.tether_length;
    bool violated = false;
    for (std::size_t k = 1; k < motion.size(); ++k) {
      dragged.move_to(motion[k]);
      double len = dragged.length();
      if (len > bound) len = length(shorten(dragged.tether(), graph.world(), Mask::CFree));
      worst = std::max(worst, len);
      violated = violated || len > bound + 1e-9;
    }
    ++report.pairs;
    report.worst_excess = std::max(report.worst_excess, worst - std::max(c1.tether_length, c2.tether_length));
    if (violated) report.violations.push_back({c1, c2, motion, worst, bound});
  }
  spdlog::debug("verify_convexity: {} pairs, {} violations", report.pairs, report.violations.size());
  return report;
}

SimplyConnectedReport verify_simply_connected(const WorkspaceGraph& graph, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SimplyConnectedReport report;
  report.seed = seed;
  const auto configs = sample_configurations(graph, 2 * samples, rng);
  for (std::size_t i = 0; i + 1 < configs.size(); i += 2) {
    const Configuration& c1 = configs[i];
    const Configuration& c2 = configs[i + 1];
    ++report.pairs;
    const auto from = graph.find(c1.location, c1.signature);
    const auto to = graph.find(c2.location, c2.signature);
    if (!from || !to) {
      ++report.unreachable;
      continue;
    }
    const Search s = workspace_dijkstra(graph, *from, *to);
    if (s.parent[*to] == kNone && *from != *to) {
      ++report.unreachable;
      continue;
    }
    if (!homotopic(trace(graph, s, *to), tr(c1, c2, graph.world()), graph.world())) ++report.not_homotopic;
  }
  return report;
}

}  // namespace tetherplan
