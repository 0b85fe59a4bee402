#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tetherplan {

/// Integer grid cell. Curve vertices sit at cell centres, so a cell doubles as a point.
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

double distance(Cell a, Cell b);

/// Non-empty vertex sequence with no repeated consecutive vertices.
class Polyline {
 public:
  explicit Polyline(Cell single) : points_{single} {}
  explicit Polyline(std::vector<Cell> points);

  const std::vector<Cell>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  Cell front() const { return points_.front(); }
  Cell back() const { return points_.back(); }
  Cell operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const Polyline&, const Polyline&) = default;

 private:
  std::vector<Cell> points_;
};

double length(const Polyline& p);
double length(std::span<const Cell> points);

/// a followed by b; the shared junction vertex appears once.
Polyline concat(const Polyline& a, const Polyline& b);
Polyline reverse(const Polyline& a);
/// First s + 1 vertices.
Polyline prefix(const Polyline& a, std::size_t s);
/// Drops interior vertices lying strictly between their neighbours on an exact line.
Polyline normalized(const Polyline& a);

}  // namespace tetherplan

template <>
struct std::hash<tetherplan::Cell> {
  std::size_t operator()(const tetherplan::Cell& c) const noexcept {
    return std::hash<long long>{}((static_cast<long long>(c.x) << 32) ^ static_cast<unsigned>(c.y));
  }
};
