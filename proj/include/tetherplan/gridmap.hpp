#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "tetherplan/curve.hpp"

namespace tetherplan {

/// Which occupancy layer a query runs against: obstacle-free cells, or cells the
/// disk robot can occupy after inflation.
enum class Mask { Free, CFree };

struct ObstacleComponent {
  int id = 0;
  /// Lexicographically smallest (x, then y) cell of the component.
  Cell representative;
  std::size_t cell_count = 0;
};

/// Occupancy grid. Row-major, y = 0 is the top row. Immutable once built.
class GridWorld {
 public:
  /// ASCII ('.' free, '#' obstacle) or binary PGM (P5, pixel >= 128 free).
  static GridWorld parse(std::string_view contents);
  static GridWorld load_file(const std::filesystem::path& path);
  /// Build directly from a free mask (true = obstacle-free); used by generators and tests.
  static GridWorld from_mask(int width, int height, std::vector<std::uint8_t> free_mask);

  int width() const { return width_; }
  int height() const { return height_; }
  double robot_radius() const { return robot_radius_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool is_free(Cell c) const { return in_bounds(c) && free_[index(c)] != 0; }
  bool is_cfree(Cell c) const { return in_bounds(c) && cfree_[index(c)] != 0; }
  bool passable(Cell c, Mask mask) const { return mask == Mask::Free ? is_free(c) : is_cfree(c); }
  /// Chebyshev distance from c to the nearest impassable or out-of-bounds cell; 0 when c is impassable.
  int clearance(Cell c, Mask mask) const {
    if (!in_bounds(c)) return 0;
    return (mask == Mask::Free ? free_clearance_ : cfree_clearance_)[index(c)];
  }

  std::size_t free_count() const;
  std::size_t cfree_count() const;

  const std::vector<ObstacleComponent>& components() const { return components_; }
  /// Component id of an obstacle cell, -1 for free or out-of-bounds cells.
  int component_at(Cell c) const { return in_bounds(c) ? label_[index(c)] : -1; }

  /// Copy with the collision-free layer recomputed for a disk robot of the given radius.
  GridWorld inflated(double radius) const;

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x);
  }
  Cell cell_at(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(width_)), static_cast<int>(i / static_cast<std::size_t>(width_))};
  }

 private:
  GridWorld(int width, int height, std::vector<std::uint8_t> free_mask);

  void label_components();
  void compute_clearance();

  int width_ = 0;
  int height_ = 0;
  double robot_radius_ = 0.0;
  std::vector<std::uint8_t> free_;
  std::vector<std::uint8_t> cfree_;
  std::vector<std::uint16_t> free_clearance_;
  std::vector<std::uint16_t> cfree_clearance_;
  std::vector<int> label_;
  std::vector<ObstacleComponent> components_;
};

GridWorld load_map(std::string_view contents);
GridWorld inflate(const GridWorld& world, double radius);

/// Walks the Bresenham cells of segment ab in canonical order (starting from the
/// lexicographically smaller endpoint). Stops early and returns false once fn does.
template <class Fn>
bool visit_raster(Cell a, Cell b, Fn&& fn) {
  const Cell from = b < a ? b : a;
  const Cell to = b < a ? a : b;
  const int dx = to.x >= from.x ? to.x - from.x : from.x - to.x;
  const int dy = to.y >= from.y ? to.y - from.y : from.y - to.y;
  const int sx = to.x >= from.x ? 1 : -1;
  const int sy = to.y >= from.y ? 1 : -1;
  // Midpoint decision variable; a tie (d == 0) keeps the minor coordinate.
  if (dx >= dy) {
    int d = 2 * dy - dx;
    int y = from.y;
    for (int i = 0, x = from.x; i <= dx; ++i, x += sx) {
      if (!fn(Cell{x, y})) return false;
      if (d > 0) {
        y += sy;
        d -= 2 * dx;
      }
      d += 2 * dy;
    }
  } else {
    int d = 2 * dx - dy;
    int x = from.x;
    for (int i = 0, y = from.y; i <= dy; ++i, y += sy) {
      if (!fn(Cell{x, y})) return false;
      if (d > 0) {
        x += sx;
        d -= 2 * dy;
      }
      d += 2 * dx;
    }
  }
  return true;
}

/// Bresenham cells from a to b inclusive. Always rasterised from the smaller endpoint,
/// so reversing the arguments reverses the sequence.
std::vector<Cell> raster_segment(Cell a, Cell b);

bool segment_free(const GridWorld& world, Cell a, Cell b, Mask mask);

}  // namespace tetherplan
