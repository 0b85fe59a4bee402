#include "tetherplan/shorten.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "tetherplan/errors.hpp"
#include "tetherplan/homotopy.hpp"

namespace tetherplan {

namespace {

constexpr double kLengthEps = 1e-9;
// Corridor searched around the current curve: cells within Chebyshev `sleeve` of it that lie
// within Chebyshev `boundary` of an impassable cell, plus vertex fan cells within `fan` of one.
struct Corridor {
  int sleeve;
  int boundary;
  int fan;  // 0: no fans
};

// Cheapest first; an improvement at any tier restarts from the first.
constexpr Corridor kTiers[] = {{1, 1, 0}, {1, 1, 3}, {1, 3, 0}};

// Words of walks from the curve's start, interned so that equal words compare by id.
class Walks {
 public:
  explicit Walks(const GridWorld& world) : world_(world) {}

  WordTrie::Id extend(WordTrie::Id from, Cell a, Cell b) {
    buffer_.clear();
    append_crossings(world_, a, b, buffer_);
    return trie_.append(from, buffer_);
  }

  // extend(from, a, b) == to, without growing the trie.
  bool joins(WordTrie::Id from, Cell a, Cell b, WordTrie::Id to) {
    buffer_.clear();
    append_crossings(world_, a, b, buffer_);
    return trie_.extends_to(from, buffer_, to);
  }

 private:
  const GridWorld& world_;
  WordTrie trie_;
  Word buffer_;
};

std::vector<Cell> densify(const std::vector<Cell>& vertices, std::vector<std::size_t>* vertex_pos = nullptr) {
  std::vector<Cell> dense{vertices.front()};
  if (vertex_pos) vertex_pos->assign(1, 0);
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const auto cells = raster_segment(vertices[i - 1], vertices[i]);
    dense.insert(dense.end(), cells.begin() + 1, cells.end());
    if (vertex_pos) vertex_pos->push_back(dense.size() - 1);
  }
  return dense;
}

// Greedy string pulling over a dense cell path: from each anchor, advance while the
// chord stays free and homotopic to the walked sub-path.
std::vector<Cell> pull(const GridWorld& world, Mask mask, Walks& walks, const std::vector<Cell>& dense) {
  std::vector<Cell> out{dense.front()};
  std::size_t anchor = 0;
  const std::size_t m = dense.size();
  while (anchor + 1 < m) {
    WordTrie::Id walked = walks.extend(WordTrie::kEmpty, dense[anchor], dense[anchor + 1]);
    std::size_t best = anchor + 1;
    for (std::size_t j = anchor + 2; j < m; ++j) {
      walked = walks.extend(walked, dense[j - 1], dense[j]);
      if (!segment_free(world, dense[anchor], dense[j], mask)) break;
      if (!walks.joins(WordTrie::kEmpty, dense[anchor], dense[j], walked)) break;
      best = j;
    }
    out.push_back(dense[best]);
    anchor = best;
  }
  return out;
}

// Shortcut passes over vertex windows (i, j), largest window first for each i, left to
// right, repeated until a pass changes nothing.
std::vector<Cell> window_passes(const GridWorld& world, Mask mask, Walks& walks, std::vector<Cell> v) {
  const std::size_t cap = std::max<std::size_t>(16, v.size() * v.size());
  bool changed = true;
  std::size_t passes = 0;
  std::vector<WordTrie::Id> walked;
  while (changed) {
    changed = false;
    if (++passes > cap) throw std::logic_error("shorten: window passes did not converge");
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
      walked.assign(v.size(), WordTrie::kEmpty);
      for (std::size_t k = i + 1; k < v.size(); ++k) walked[k] = walks.extend(walked[k - 1], v[k - 1], v[k]);
      for (std::size_t j = v.size() - 1; j >= i + 2; --j) {
        if (!walks.joins(WordTrie::kEmpty, v[i], v[j], walked[j])) continue;
        if (!segment_free(world, v[i], v[j], mask)) continue;
        v.erase(v.begin() + static_cast<long>(i) + 1, v.begin() + static_cast<long>(j));
        changed = true;
        break;
      }
    }
  }
  return v;
}

long long cross(Cell o, Cell a, Cell b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

// Boundary cells inside triangle (a, b, c) visible from b, ordered by angle around b from a towards c.
// The shortest route homotopic to a -> b -> c lies in that triangle.
std::vector<Cell> fan(const GridWorld& world, Mask mask, int boundary, Cell a, Cell b, Cell c) {
  const long long turn = cross(a, b, c);
  if (turn == 0) return {};
  std::vector<std::pair<double, Cell>> keyed;
  const int x0 = std::min({a.x, b.x, c.x}), x1 = std::max({a.x, b.x, c.x});
  const int y0 = std::min({a.y, b.y, c.y}), y1 = std::max({a.y, b.y, c.y});
  const double ax = a.x - b.x, ay = a.y - b.y;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Cell p{x, y};
      if (p == b) continue;
      const long long s1 = cross(a, b, p), s2 = cross(b, c, p), s3 = cross(c, a, p);
      const bool inside = turn > 0 ? (s1 >= 0 && s2 >= 0 && s3 >= 0) : (s1 <= 0 && s2 <= 0 && s3 <= 0);
      if (!inside || !world.passable(p, mask) || world.clearance(p, mask) > boundary) continue;
      if (!segment_free(world, b, p, mask)) continue;
      const double px = p.x - b.x, py = p.y - b.y;
      keyed.emplace_back(std::abs(std::atan2(ax * py - ay * px, ax * px + ay * py)), p);
    }
  }
  std::sort(keyed.begin(), keyed.end(), [b](const auto& l, const auto& r) {
    if (l.first != r.first) return l.first < r.first;
    return distance(b, l.second) < distance(b, r.second);
  });
  std::vector<Cell> out;
  out.reserve(keyed.size());
  for (const auto& [angle, p] : keyed) out.push_back(p);
  return out;
}

// Shortest path through a corridor around the current curve. Nodes are the curve's
// vertices plus the corridor cells. Each node carries the word of the walk
// start -> dense path -> node; an edge u -> v (u created earlier) is admitted when the
// chord is free and extends u's word to v's. The current vertex chain is always a
// feasible route, so the result is never longer.
std::vector<Cell> refine(const GridWorld& world, Mask mask, Walks& walks, const Corridor& corridor,
                         const std::vector<Cell>& vertices) {
  std::vector<std::size_t> vpos;
  const std::vector<Cell> dense = densify(vertices, &vpos);
  const std::size_t m = dense.size();

  struct Node {
    Cell cell;
    WordTrie::Id word;
  };
  std::vector<Node> nodes;
  std::size_t end_node = 0;
  // A boundary cell keeps one node while it stays on the same sheet as seen from the dense path.
  std::unordered_map<Cell, WordTrie::Id> active, next_active;
  std::size_t next_vertex = 0;
  WordTrie::Id prefix = WordTrie::kEmpty;
  for (std::size_t k = 0; k < m; ++k) {
    if (k > 0) prefix = walks.extend(prefix, dense[k - 1], dense[k]);
    while (next_vertex < vpos.size() && vpos[next_vertex] == k) {
      if (next_vertex + 1 == vpos.size()) end_node = nodes.size();
      nodes.push_back({vertices[next_vertex], prefix});
      if (corridor.fan > 0 && next_vertex > 0 && next_vertex + 1 < vertices.size()) {
        const Cell b = vertices[next_vertex];
        const auto cells = fan(world, mask, corridor.fan, vertices[next_vertex - 1], b, vertices[next_vertex + 1]);
        for (const Cell& c : cells) {
          nodes.push_back({c, walks.extend(prefix, b, c)});
        }
      }
      ++next_vertex;
    }
    next_active.clear();
    const Cell d = dense[k];
    for (int dy = -corridor.sleeve; dy <= corridor.sleeve; ++dy) {
      for (int dx = -corridor.sleeve; dx <= corridor.sleeve; ++dx) {
        const Cell c{d.x + dx, d.y + dy};
        if (!world.passable(c, mask) || world.clearance(c, mask) > corridor.boundary) continue;
        if (!segment_free(world, d, c, mask)) continue;
        const WordTrie::Id word = walks.extend(prefix, d, c);
        next_active.emplace(c, word);
        if (auto prev = active.find(c); prev != active.end() && prev->second == word) continue;
        nodes.push_back({c, word});
      }
    }
    std::swap(active, next_active);
  }

  // Nodes in the same ray slot (same count of ray columns to their left) are joined by crossing-free chords.
  std::vector<int> ray_x;
  for (const auto& comp : world.components()) ray_x.push_back(comp.representative.x);
  std::vector<std::uint32_t> slot(end_node + 1);
  for (std::size_t k = 0; k <= end_node; ++k) {
    slot[k] = static_cast<std::uint32_t>(std::lower_bound(ray_x.begin(), ray_x.end(), nodes[k].cell.x) - ray_x.begin());
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(end_node + 1, inf);
  std::vector<std::size_t> pred(end_node + 1, 0);
  dist[0] = 0.0;
  using Candidate = std::pair<double, std::size_t>;
  std::vector<Candidate> candidates;
  auto admits = [&](std::size_t u, std::size_t v) {
    const Node& nu = nodes[u];
    const Node& nv = nodes[v];
    return slot[u] == slot[v] ? nu.word == nv.word : walks.joins(nu.word, nu.cell, nv.cell, nv.word);
  };
  for (std::size_t v = 1; v <= end_node; ++v) {
    candidates.clear();
    const Node& nv = nodes[v];
    // A few likely predecessors give an upper bound; only strictly better (cost, u) pairs are searched.
    Candidate bound{inf, 0};
    for (const std::size_t u : {pred[v - 1], v - 1, v >= 2 ? v - 2 : 0}) {
      if (!(dist[u] < inf)) continue;
      const Candidate c{dist[u] + distance(nodes[u].cell, nv.cell), u};
      if (c < bound && admits(u, v) && segment_free(world, nodes[u].cell, nv.cell, mask)) bound = c;
    }
    for (std::size_t u = 0; u < v; ++u) {
      if (!(dist[u] < inf)) continue;
      const Candidate c{dist[u] + distance(nodes[u].cell, nv.cell), u};
      if (!(c < bound)) continue;
      if (!admits(u, v)) continue;
      candidates.push_back(c);
    }
    std::sort(candidates.begin(), candidates.end());
    for (const Candidate& c : candidates) {
      if (!segment_free(world, nodes[c.second].cell, nv.cell, mask)) continue;
      bound = c;
      break;
    }
    if (bound.first < inf) {
      dist[v] = bound.first;
      pred[v] = bound.second;
    }
  }
  if (!(dist[end_node] < inf)) return vertices;

  std::vector<Cell> out;
  for (std::size_t v = end_node;; v = pred[v]) {
    if (out.empty() || out.back() != nodes[v].cell) out.push_back(nodes[v].cell);
    if (v == 0) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

Polyline shorten(const Polyline& p, const GridWorld& world, Mask mask) {
  const auto& pts = p.points();
  if (!world.passable(pts.front(), mask)) throw PreconditionError("shorten: curve starts outside the mask");
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!segment_free(world, pts[i - 1], pts[i], mask)) {
      throw PreconditionError("shorten: curve segment " + std::to_string(i - 1) + " collides with the mask");
    }
  }
  if (pts.size() == 1) return p;

  Walks walks(world);
  std::vector<Cell> current = normalized(p).points();
  double current_length = length(std::span<const Cell>(current));
  const std::size_t cap = std::max<std::size_t>(64, current.size() * current.size());
  std::size_t tier = 0;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > cap) throw std::logic_error("shorten: refinement did not converge");
    std::vector<Cell> candidate = pull(world, mask, walks, densify(current));
    candidate = window_passes(world, mask, walks, std::move(candidate));
    candidate = refine(world, mask, walks, kTiers[tier], candidate);
    candidate = normalized(Polyline(std::move(candidate))).points();
    const double candidate_length = length(std::span<const Cell>(candidate));
    if (candidate_length < current_length - kLengthEps) {
      current = std::move(candidate);
      current_length = candidate_length;
      tier = 0;
    } else if (tier + 1 < std::size(kTiers)) {
      ++tier;
    } else {
      break;
    }
  }
  return Polyline(std::move(current));
}

TautTether taut_tether(Cell base, const Polyline& raw, const GridWorld& world) {
  if (raw.front() != base) throw PreconditionError("taut_tether: raw curve does not start at the base");
  Polyline tether = shorten(raw, world, Mask::CFree);
  const double len = length(tether);
  return {std::move(tether), len};
}

namespace {

long long orient(Cell a, Cell b, Cell c) {
  const long long v = static_cast<long long>(b.x - a.x) * (c.y - a.y) - static_cast<long long>(b.y - a.y) * (c.x - a.x);
  return (v > 0) - (v < 0);
}

bool strictly_inside(Cell p, Cell a, Cell b) {
  if (orient(a, b, p) != 0) return false;
  const long long dot = static_cast<long long>(p.x - a.x) * (b.x - p.x) + static_cast<long long>(p.y - a.y) * (b.y - p.y);
  return dot > 0;
}

// Collinear segments sharing more than a point.
bool overlap(Cell a, Cell b, Cell c, Cell d) {
  if (orient(a, b, c) != 0 || orient(a, b, d) != 0) return false;
  if (a == b || c == d) return false;
  const bool by_x = a.x != b.x;
  auto key = [by_x](Cell q) { return by_x ? q.x : q.y; };
  const int lo1 = std::min(key(a), key(b)), hi1 = std::max(key(a), key(b));
  const int lo2 = std::min(key(c), key(d)), hi2 = std::max(key(c), key(d));
  return std::min(hi1, hi2) > std::max(lo1, lo2);
}

double angle_of(Cell from, Cell to) { return std::atan2(to.y - from.y, to.x - from.x); }

// True iff `probe` lies strictly inside the counter-clockwise arc from `start` to `end`.
bool in_arc(double start, double end, double probe) {
  constexpr double two_pi = 2.0 * M_PI;
  auto norm = [&](double a) { return std::fmod(std::fmod(a - start, two_pi) + two_pi, two_pi); };
  const double e = norm(end);
  const double q = norm(probe);
  return q > 0.0 && q < e;
}

}  // namespace

bool is_self_crossing(const Polyline& p) {
  const auto& v = p.points();
  const std::size_t n = v.size();
  if (n < 3) return false;
  const std::size_t segs = n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    for (std::size_t j = i + 2; j < segs; ++j) {
      const Cell a = v[i], b = v[i + 1], c = v[j], d = v[j + 1];
      if (orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0) return true;
      if (overlap(a, b, c, d)) return true;
    }
  }
  // An interior vertex resting on another segment: crossing iff its neighbours straddle it.
  for (std::size_t k = 1; k + 1 < n; ++k) {
    for (std::size_t s = 0; s < segs; ++s) {
      if (s + 1 == k || s == k) continue;
      if (!strictly_inside(v[k], v[s], v[s + 1])) continue;
      if (orient(v[s], v[s + 1], v[k - 1]) * orient(v[s], v[s + 1], v[k + 1]) < 0) return true;
    }
  }
  // Two interior vertices at the same point: crossing iff their wedges interleave.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t k = i + 2; k + 1 < n; ++k) {
      if (v[i] != v[k]) continue;
      const double a1 = angle_of(v[i], v[i - 1]);
      const double a2 = angle_of(v[i], v[i + 1]);
      const bool b1 = in_arc(a1, a2, angle_of(v[k], v[k - 1]));
      const bool b2 = in_arc(a1, a2, angle_of(v[k], v[k + 1]));
      if (b1 != b2) return true;
    }
  }
  return false;
}

}  // namespace tetherplan
