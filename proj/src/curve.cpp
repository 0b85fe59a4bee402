#include "tetherplan/curve.hpp"

#include <cmath>
#include <string>

#include "tetherplan/errors.hpp"

namespace tetherplan {

double distance(Cell a, Cell b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

Polyline::Polyline(std::vector<Cell> points) {
  if (points.empty()) throw PreconditionError("polyline must have at least one vertex");
  points_.reserve(points.size());
  for (const Cell& c : points) {
    if (points_.empty() || points_.back() != c) points_.push_back(c);
  }
}

// Segments are added in mirrored pairs, so a curve and its reverse get bit-identical lengths.
double length(std::span<const Cell> points) {
  if (points.size() < 2) return 0.0;
  const std::size_t n = points.size() - 1;
  double total = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    total += distance(points[i], points[i + 1]) + distance(points[n - i - 1], points[n - i]);
  }
  if (n % 2 == 1) total += distance(points[n / 2], points[n / 2 + 1]);
  return total;
}

double length(const Polyline& p) { return length(std::span<const Cell>(p.points())); }

Polyline concat(const Polyline& a, const Polyline& b) {
  if (a.back() != b.front()) {
    throw PreconditionError("concat: junction mismatch (" + std::to_string(a.back().x) + "," +
                            std::to_string(a.back().y) + ") vs (" + std::to_string(b.front().x) +
                            "," + std::to_string(b.front().y) + ")");
  }
  std::vector<Cell> pts = a.points();
  pts.insert(pts.end(), b.points().begin() + 1, b.points().end());
  return Polyline(std::move(pts));
}

Polyline reverse(const Polyline& a) {
  return Polyline(std::vector<Cell>(a.points().rbegin(), a.points().rend()));
}

Polyline prefix(const Polyline& a, std::size_t s) {
  if (s >= a.size()) throw PreconditionError("prefix: index out of range");
  return Polyline(std::vector<Cell>(a.points().begin(), a.points().begin() + static_cast<long>(s) + 1));
}

namespace {

// b strictly inside segment ac, all three on one line.
bool strictly_between(Cell a, Cell b, Cell c) {
  const long long cross = static_cast<long long>(b.x - a.x) * (c.y - a.y) -
                          static_cast<long long>(b.y - a.y) * (c.x - a.x);
  if (cross != 0) return false;
  const long long dot = static_cast<long long>(b.x - a.x) * (c.x - b.x) +
                        static_cast<long long>(b.y - a.y) * (c.y - b.y);
  return dot > 0;
}

}  // namespace

Polyline normalized(const Polyline& a) {
  std::vector<Cell> out;
  out.reserve(a.size());
  for (const Cell& c : a.points()) {
    while (out.size() >= 2 && strictly_between(out[out.size() - 2], out.back(), c)) out.pop_back();
    out.push_back(c);
  }
  return Polyline(std::move(out));
}

}  // namespace tetherplan
