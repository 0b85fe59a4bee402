#include "tetherplan/gridmap.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <string>

#include "tetherplan/errors.hpp"

namespace tetherplan {

namespace {

GridWorld parse_ascii(std::string_view text) {
  std::vector<std::string_view> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(start, end - start);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    rows.push_back(row);
    start = end + 1;
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw FormatError("map: no rows");

  const std::size_t width = rows.front().size();
  if (width == 0) throw FormatError("map: empty first row");
  std::vector<std::uint8_t> mask;
  mask.reserve(width * rows.size());
  for (std::size_t y = 0; y < rows.size(); ++y) {
    if (rows[y].size() != width) {
      throw FormatError("map: ragged row " + std::to_string(y) + " (expected " + std::to_string(width) +
                        " columns, got " + std::to_string(rows[y].size()) + ")");
    }
    for (char ch : rows[y]) {
      if (ch == '.') {
        mask.push_back(1);
      } else if (ch == '#') {
        mask.push_back(0);
      } else {
        throw FormatError(std::string("map: unexpected character '") + ch + "' in row " + std::to_string(y));
      }
    }
  }
  return GridWorld::from_mask(static_cast<int>(width), static_cast<int>(rows.size()), std::move(mask));
}

// Reads the next header token of a PGM, skipping whitespace and '#' comments.
std::string pgm_token(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    const auto ch = static_cast<unsigned char>(bytes[pos]);
    if (std::isspace(ch)) {
      ++pos;
    } else if (ch == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  std::size_t begin = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (begin == pos) throw FormatError("pgm: truncated header");
  return std::string(bytes.substr(begin, pos - begin));
}

int pgm_int(std::string_view bytes, std::size_t& pos) {
  const std::string tok = pgm_token(bytes, pos);
  int value = 0;
  try {
    std::size_t used = 0;
    value = std::stoi(tok, &used);
    if (used != tok.size()) throw FormatError("pgm: bad header integer '" + tok + "'");
  } catch (const std::logic_error&) {
    throw FormatError("pgm: bad header integer '" + tok + "'");
  }
  return value;
}

GridWorld parse_pgm(std::string_view bytes) {
  std::size_t pos = 2;
  const int width = pgm_int(bytes, pos);
  const int height = pgm_int(bytes, pos);
  const int maxval = pgm_int(bytes, pos);
  if (width <= 0 || height <= 0) throw FormatError("pgm: non-positive dimensions");
  if (maxval <= 0 || maxval > 255) throw FormatError("pgm: only 8-bit maxval is supported");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw FormatError("pgm: missing whitespace before raster");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < n) throw FormatError("pgm: raster shorter than width*height");
  std::vector<std::uint8_t> mask(n);
  for (std::size_t i = 0; i < n; ++i) mask[i] = static_cast<unsigned char>(bytes[pos + i]) >= 128 ? 1 : 0;
  return GridWorld::from_mask(width, height, std::move(mask));
}

}  // namespace

GridWorld::GridWorld(int width, int height, std::vector<std::uint8_t> free_mask)
    : width_(width), height_(height), free_(std::move(free_mask)) {
  cfree_ = free_;
  label_components();
  compute_clearance();
}

GridWorld GridWorld::from_mask(int width, int height, std::vector<std::uint8_t> free_mask) {
  if (width <= 0 || height <= 0) throw FormatError("map: non-positive dimensions");
  if (free_mask.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw FormatError("map: mask size does not match dimensions");
  }
  for (auto& v : free_mask) v = v ? 1 : 0;
  if (std::none_of(free_mask.begin(), free_mask.end(), [](std::uint8_t v) { return v != 0; })) {
    throw EmptyWorldError("map has no free cells");
  }
  return GridWorld(width, height, std::move(free_mask));
}

GridWorld GridWorld::parse(std::string_view contents) {
  if (contents.size() >= 2 && contents[0] == 'P' && std::isdigit(static_cast<unsigned char>(contents[1]))) {
    if (contents[1] != '5') throw FormatError(std::string("unsupported map magic number P") + contents[1]);
    return parse_pgm(contents);
  }
  return parse_ascii(contents);
}

GridWorld GridWorld::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open map file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void GridWorld::label_components() {
  label_.assign(free_.size(), -1);
  components_.clear();
  std::queue<Cell> frontier;
  // x-major scan: the first cell reached in a component is its lexicographic minimum.
  for (int x = 0; x < width_; ++x) {
    for (int y = 0; y < height_; ++y) {
      const Cell seed{x, y};
      if (free_[index(seed)] || label_[index(seed)] >= 0) continue;
      ObstacleComponent comp{static_cast<int>(components_.size()), seed, 0};
      label_[index(seed)] = comp.id;
      frontier.push(seed);
      while (!frontier.empty()) {
        const Cell c = frontier.front();
        frontier.pop();
        ++comp.cell_count;
        for (const Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
          const Cell n{c.x + d.x, c.y + d.y};
          if (!in_bounds(n) || free_[index(n)] || label_[index(n)] >= 0) continue;
          label_[index(n)] = comp.id;
          frontier.push(n);
        }
      }
      components_.push_back(comp);
    }
  }
}

namespace {

// Two-pass chessboard distance transform; the outside of the grid counts as blocked.
std::vector<std::uint16_t> chessboard_clearance(const std::vector<std::uint8_t>& mask, int width, int height) {
  std::vector<std::uint16_t> d(mask.size());
  const auto at = [&](int x, int y) -> int {
    if (x < 0 || y < 0 || x >= width || y >= height) return 0;
    return d[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto i = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
      if (!mask[i]) continue;
      const int m = std::min({at(x - 1, y - 1), at(x, y - 1), at(x + 1, y - 1), at(x - 1, y)});
      d[i] = static_cast<std::uint16_t>(m + 1);
    }
  }
  for (int y = height - 1; y >= 0; --y) {
    for (int x = width - 1; x >= 0; --x) {
      const auto i = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
      if (!mask[i]) continue;
      const int m = std::min({at(x + 1, y + 1), at(x, y + 1), at(x - 1, y + 1), at(x + 1, y)});
      d[i] = static_cast<std::uint16_t>(std::min<int>(d[i], m + 1));
    }
  }
  return d;
}

}  // namespace

void GridWorld::compute_clearance() {
  free_clearance_ = chessboard_clearance(free_, width_, height_);
  cfree_clearance_ = chessboard_clearance(cfree_, width_, height_);
}

std::size_t GridWorld::free_count() const {
  return static_cast<std::size_t>(std::count(free_.begin(), free_.end(), std::uint8_t{1}));
}

std::size_t GridWorld::cfree_count() const {
  return static_cast<std::size_t>(std::count(cfree_.begin(), cfree_.end(), std::uint8_t{1}));
}

GridWorld GridWorld::inflated(double radius) const {
  if (radius < 0.0) throw PreconditionError("inflate: negative radius");
  GridWorld out = *this;
  out.robot_radius_ = radius;
  out.cfree_ = free_;

  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  std::vector<Cell> disk;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (static_cast<double>(dx * dx + dy * dy) <= r2) disk.push_back({dx, dy});
    }
  }
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const Cell c{x, y};
      // Nearest out-of-bounds cell centre is straight across the nearest border.
      const int border = std::min({x + 1, y + 1, width_ - x, height_ - y});
      if (static_cast<double>(border) <= radius) out.cfree_[index(c)] = 0;
      if (free_[index(c)]) continue;
      for (const Cell d : disk) {
        const Cell n{x + d.x, y + d.y};
        if (in_bounds(n)) out.cfree_[index(n)] = 0;
      }
    }
  }
  out.compute_clearance();
  return out;
}

GridWorld load_map(std::string_view contents) { return GridWorld::parse(contents); }

GridWorld inflate(const GridWorld& world, double radius) { return world.inflated(radius); }

std::vector<Cell> raster_segment(Cell a, Cell b) {
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(std::max(std::abs(a.x - b.x), std::abs(a.y - b.y))) + 1);
  visit_raster(a, b, [&](Cell c) {
    cells.push_back(c);
    return true;
  });
  if (b < a) std::reverse(cells.begin(), cells.end());
  return cells;
}

bool segment_free(const GridWorld& world, Cell a, Cell b, Mask mask) {
  if (!world.in_bounds(a) || !world.in_bounds(b)) return false;
  if (!world.passable(a, mask) || !world.passable(b, mask)) return false;
  // Same cells as visit_raster, but every cell within a visited cell's clearance is skipped.
  const Cell from = b < a ? b : a;
  const Cell to = b < a ? a : b;
  const bool x_major = std::abs(to.x - from.x) >= std::abs(to.y - from.y);
  const long long major = x_major ? std::abs(to.x - from.x) : std::abs(to.y - from.y);
  const long long minor = x_major ? std::abs(to.y - from.y) : std::abs(to.x - from.x);
  const int sx = to.x >= from.x ? 1 : -1;
  const int sy = to.y >= from.y ? 1 : -1;
  for (long long i = 0; i <= major;) {
    const long long num = 2 * minor * i - major;
    const long long k = num <= 0 ? 0 : (num + 2 * major - 1) / (2 * major);
    const Cell c = x_major ? Cell{from.x + sx * static_cast<int>(i), from.y + sy * static_cast<int>(k)}
                           : Cell{from.x + sx * static_cast<int>(k), from.y + sy * static_cast<int>(i)};
    const int r = world.clearance(c, mask);
    if (r == 0) return false;
    i += r;
  }
  return true;
}

}  // namespace tetherplan
