#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <string>

#include "tetherplan/errors.hpp"

#ifndef TETHERPLAN_FIXTURE_DIR
#error "TETHERPLAN_FIXTURE_DIR must be defined"
#endif

namespace tetherplan::testing {

namespace {

void stamp_blob(std::vector<std::uint8_t>& mask, int width, int height, std::mt19937_64& rng, int min_size,
                int max_size) {
  std::uniform_int_distribution<int> size_dist(min_size, max_size);
  std::uniform_int_distribution<int> xs(0, width - 1), ys(0, height - 1), kind(0, 1);
  const int cx = xs(rng), cy = ys(rng);
  const int sx = size_dist(rng), sy = size_dist(rng);
  const bool disk = kind(rng) == 1;
  for (int y = cy - sy; y <= cy + sy; ++y) {
    for (int x = cx - sx; x <= cx + sx; ++x) {
      if (x < 0 || y < 0 || x >= width || y >= height) continue;
      if (disk) {
        const double r = 0.5 * (sx + sy);
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) > r * r) continue;
      }
      mask[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = 0;
    }
  }
}

}  // namespace

GridWorld random_blob_map(int width, int height, double density, int blobs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 1);
  const int base = std::max(2, std::min(width, height) / 12);
  auto blocked = [&] {
    return static_cast<double>(std::count(mask.begin(), mask.end(), std::uint8_t{0})) / static_cast<double>(mask.size());
  };
  for (int i = 0; i < blobs || blocked() < density; ++i) {
    if (i > 10 * blobs + 1000) break;
    if (blocked() >= density) break;
    stamp_blob(mask, width, height, rng, base, 2 * base);
  }
  return GridWorld::from_mask(width, height, std::move(mask));
}

GridWorld random_obstacle_map(int width, int height, int obstacles, int min_size, int max_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 1);
  for (int i = 0; i < obstacles; ++i) stamp_blob(mask, width, height, rng, min_size, max_size);
  return GridWorld::from_mask(width, height, std::move(mask));
}

Cell random_cell(const GridWorld& world, Mask mask, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> xs(0, world.width() - 1), ys(0, world.height() - 1);
  for (int tries = 0; tries < 1'000'000; ++tries) {
    const Cell c{xs(rng), ys(rng)};
    if (world.passable(c, mask)) return c;
  }
  throw PreconditionError("random_cell: mask is empty");
}

Polyline random_curve_from(const GridWorld& world, Mask mask, std::mt19937_64& rng, Cell start, int vertices,
                           int max_step) {
  std::vector<Cell> pts{start};
  std::uniform_int_distribution<int> step(-max_step, max_step);
  for (int i = 1; i < vertices; ++i) {
    for (int tries = 0; tries < 200; ++tries) {
      const Cell n{pts.back().x + step(rng), pts.back().y + step(rng)};
      if (n == pts.back()) continue;
      if (segment_free(world, pts.back(), n, mask)) {
        pts.push_back(n);
        break;
      }
    }
  }
  return Polyline(std::move(pts));
}

Polyline random_curve(const GridWorld& world, Mask mask, std::mt19937_64& rng, int vertices, int max_step) {
  return random_curve_from(world, mask, rng, random_cell(world, mask, rng), vertices, max_step);
}

std::vector<Cell> textbook_midpoint(Cell a, Cell b) {
  const bool flip = b < a;
  const Cell p = flip ? b : a;
  const Cell q = flip ? a : b;
  const long long du = std::abs(q.x - p.x), dv = std::abs(q.y - p.y);
  const bool x_major = du >= dv;
  const long long major = x_major ? du : dv;
  const long long minor = x_major ? dv : du;
  const int smaj = x_major ? (q.x >= p.x ? 1 : -1) : (q.y >= p.y ? 1 : -1);
  const int smin = x_major ? (q.y >= p.y ? 1 : -1) : (q.x >= p.x ? 1 : -1);
  std::vector<Cell> out;
  for (long long t = 0; t <= major; ++t) {
    // Minor offset = t*minor/major rounded half towards zero: ceil((2*t*minor - major) / (2*major)).
    long long off = 0;
    if (major > 0) {
      const long long num = 2 * t * minor - major;
      const long long den = 2 * major;
      off = num >= 0 ? (num + den - 1) / den : -((-num) / den);
    }
    const int mj = static_cast<int>(t) * smaj;
    const int mn = static_cast<int>(off) * smin;
    out.push_back(x_major ? Cell{p.x + mj, p.y + mn} : Cell{p.x + mn, p.y + mj});
  }
  if (flip) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<bool> brute_force_cfree(const GridWorld& world, double radius) {
  const int w = world.width(), h = world.height();
  std::vector<bool> out(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), false);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool ok = world.is_free({x, y});
      // Every cell in a generous window, including those beyond the border.
      const int reach = static_cast<int>(std::ceil(radius)) + 1;
      for (int oy = y - reach; ok && oy <= y + reach; ++oy) {
        for (int ox = x - reach; ok && ox <= x + reach; ++ox) {
          const bool obstacle = !world.in_bounds({ox, oy}) || !world.is_free({ox, oy});
          if (!obstacle) continue;
          const double d = std::hypot(ox - x, oy - y);
          if (d <= radius) ok = false;
        }
      }
      out[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] = ok;
    }
  }
  return out;
}

namespace {

std::vector<Cell> largest_cells(const GridWorld& world) {
  std::vector<Cell> anchor(world.components().size(), Cell{-1, -1});
  for (int y = 0; y < world.height(); ++y) {
    for (int x = 0; x < world.width(); ++x) {
      const int id = world.component_at({x, y});
      if (id >= 0 && anchor[static_cast<std::size_t>(id)] < Cell{x, y}) anchor[static_cast<std::size_t>(id)] = {x, y};
    }
  }
  return anchor;
}

// Ray of component k: y = ay_k + eps_k, x > ax_k. A vertex on the ray's row counts as above it.
void horizontal_letters(const std::vector<Cell>& anchor, Cell a, Cell b, Word& w) {
  if (a.y == b.y) return;
  std::vector<std::pair<double, Letter>> hits;
  for (std::size_t k = 0; k < anchor.size(); ++k) {
    const Cell r = anchor[k];
    const int lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
    if (!(lo <= r.y && r.y < hi)) continue;
    const double t =
        (static_cast<double>(r.y) + 1e-7 * (1.0 + static_cast<double>(k)) - a.y) / static_cast<double>(b.y - a.y);
    const double x = a.x + t * (b.x - a.x);
    if (x > r.x) hits.emplace_back(t, Letter{static_cast<int>(k), b.y > a.y ? 1 : -1});
  }
  std::sort(hits.begin(), hits.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  for (const auto& [t, l] : hits) w.push_back(l);
}

}  // namespace

Word horizontal_ray_word(const GridWorld& world, const Polyline& p) {
  const auto anchor = largest_cells(world);
  Word w;
  const auto& pts = p.points();
  for (std::size_t i = 1; i < pts.size(); ++i) horizontal_letters(anchor, pts[i - 1], pts[i], w);
  return reduce(std::move(w));
}

std::vector<Polyline> class_representatives(const GridWorld& world, Mask mask, Cell from, Cell to, double bound) {
  const auto anchor = largest_cells(world);
  using Key = std::pair<Cell, Word>;
  struct Item {
    double cost;
    Key key;
    bool operator>(const Item& o) const { return cost > o.cost; }
  };
  std::map<Key, double> best;
  std::map<Key, Key> parent;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  std::vector<Polyline> out;
  if (!world.passable(from, mask) || !world.passable(to, mask)) return out;
  best[{from, {}}] = 0.0;
  open.push({0.0, {from, {}}});
  while (!open.empty()) {
    Item it = open.top();
    open.pop();
    if (it.cost > best[it.key] + 1e-12) continue;
    if (it.key.first == to) {
      std::vector<Cell> path;
      Key k = it.key;
      for (;;) {
        path.push_back(k.first);
        auto pi = parent.find(k);
        if (pi == parent.end()) break;
        k = pi->second;
      }
      std::reverse(path.begin(), path.end());
      out.emplace_back(std::move(path));
    }
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const Cell n{it.key.first.x + dx, it.key.first.y + dy};
        if ((dx == 0 && dy == 0) || !world.passable(n, mask)) continue;
        const double c = it.cost + std::hypot(dx, dy);
        if (c + std::max(std::abs(n.x - to.x), std::abs(n.y - to.y)) > bound + 1e-9) continue;
        Word w = it.key.second;
        horizontal_letters(anchor, it.key.first, n, w);
        Key nk{n, reduce(std::move(w))};
        auto bi = best.find(nk);
        if (bi != best.end() && bi->second <= c + 1e-12) continue;
        best[nk] = c;
        parent[nk] = it.key;
        open.push({c, std::move(nk)});
      }
    }
  }
  return out;
}

namespace {

struct ClassState {
  double cost;
  Cell cell;
  Word word;
  bool operator>(const ClassState& o) const { return cost > o.cost; }
};

template <class Neighbours>
double class_search(const GridWorld& world, const Polyline& p, Neighbours&& neighbours, double bound,
                    std::vector<Cell>* path) {
  const Cell goal = p.back();
  const Word target = HSignature(crossings(world, p.points())).word();
  using Key = std::pair<Cell, Word>;
  std::map<Key, double> best;
  std::map<Key, Key> parent;
  std::priority_queue<ClassState, std::vector<ClassState>, std::greater<>> open;
  open.push({0.0, p.front(), {}});
  best[{p.front(), {}}] = 0.0;
  while (!open.empty()) {
    ClassState s = open.top();
    open.pop();
    if (s.cost > best[{s.cell, s.word}] + 1e-12) continue;
    if (s.cell == goal && s.word == target) {
      if (path) {
        path->clear();
        Key k{s.cell, s.word};
        for (;;) {
          path->push_back(k.first);
          auto it = parent.find(k);
          if (it == parent.end()) break;
          k = it->second;
        }
        std::reverse(path->begin(), path->end());
      }
      return s.cost;
    }
    neighbours(s.cell, [&](Cell n, double step) {
      const double c = s.cost + step;
      if (c + distance(n, goal) > bound + 1e-9) return;
      Word w = s.word;
      append_crossings(world, s.cell, n, w);
      w = reduce(std::move(w));
      auto key = std::make_pair(n, w);
      auto it = best.find(key);
      if (it != best.end() && it->second <= c + 1e-12) return;
      best[key] = c;
      parent[key] = {s.cell, s.word};
      open.push({c, n, std::move(w)});
    });
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

double class_optimum_length(const GridWorld& world, Mask mask, const Polyline& p, std::vector<Cell>* path) {
  std::vector<Cell> cells;
  for (int y = 0; y < world.height(); ++y)
    for (int x = 0; x < world.width(); ++x)
      if (world.passable({x, y}, mask)) cells.push_back({x, y});
  return class_search(
      world, p,
      [&](Cell from, auto&& emit) {
        for (const Cell c : cells) {
          if (c != from && segment_free(world, from, c, mask)) emit(c, distance(from, c));
        }
      },
      length(p), path);
}

double class_grid_optimum(const GridWorld& world, Mask mask, const Polyline& p) {
  return class_search(
      world, p,
      [&](Cell from, auto&& emit) {
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const Cell n{from.x + dx, from.y + dy};
            if ((dx || dy) && segment_free(world, from, n, mask)) emit(n, distance(from, n));
          }
      },
      1.0825 * length(p) + 4.0, nullptr);
}

GridWorld fixture(std::string_view name) {
  return GridWorld::load_file(std::string(TETHERPLAN_FIXTURE_DIR) + "/" + std::string(name));
}

GridWorld centred_obstacle_map(int size, int side) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 1);
  const int lo = (size - side) / 2;
  for (int y = lo; y < lo + side; ++y)
    for (int x = lo; x < lo + side; ++x) mask[static_cast<std::size_t>(y * size + x)] = 0;
  return GridWorld::from_mask(size, size, std::move(mask));
}

}  // namespace tetherplan::testing
