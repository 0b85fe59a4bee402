#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cli.hpp"

namespace tetherplan::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

class Canvas {
 public:
  explicit Canvas(const GridWorld& world) : scale_(std::clamp(800 / std::max(world.width(), world.height()), 2, 24)) {}

  int scale() const { return scale_; }
  double cx(Cell c) const { return (c.x + 0.5) * scale_; }
  double cy(Cell c) const { return (c.y + 0.5) * scale_; }

  std::string points(const Polyline& p) const {
    std::string out;
    for (Cell c : p.points()) {
      if (!out.empty()) out += ' ';
      out += num(cx(c)) + "," + num(cy(c));
    }
    return out;
  }

 private:
  int scale_;
};

// One rect per horizontal run of cells matching `pick`.
template <class Pick>
void runs(std::string& svg, const GridWorld& world, int s, const char* fill, Pick pick) {
  for (int y = 0; y < world.height(); ++y) {
    for (int x = 0; x < world.width();) {
      if (!pick(Cell{x, y})) {
        ++x;
        continue;
      }
      int end = x;
      while (end < world.width() && pick(Cell{end, y})) ++end;
      svg += "<rect x=\"" + std::to_string(x * s) + "\" y=\"" + std::to_string(y * s) + "\" width=\"" +
             std::to_string((end - x) * s) + "\" height=\"" + std::to_string(s) + "\" fill=\"" + fill + "\"/>\n";
      x = end;
    }
  }
}

std::string star(double x, double y, double r) {
  std::string out;
  for (int i = 0; i < 10; ++i) {
    const double a = -kPi / 2 + i * kPi / 5;
    const double rr = i % 2 == 0 ? r : r * 0.45;
    if (!out.empty()) out += ' ';
    out += num(x + rr * std::cos(a)) + "," + num(y + rr * std::sin(a));
  }
  return out;
}

}  // namespace

std::string render_svg(const GridWorld& world, const Drawing& drawing) {
  const Canvas cv(world);
  const int s = cv.scale();
  const double mark = std::max(4.0, 1.2 * s);
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(world.width() * s) +
                    "\" height=\"" + std::to_string(world.height() * s) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  runs(svg, world, s, "#dddddd", [&](Cell c) { return world.is_free(c) && !world.is_cfree(c); });
  runs(svg, world, s, "#808080", [&](Cell c) { return !world.is_free(c); });

  const std::string stroke = num(std::max(1.0, s / 4.0));
  for (const Polyline& t : drawing.tethers) {
    svg += "<polyline points=\"" + cv.points(t) + "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"" + stroke +
           "\"/>\n";
  }
  if (drawing.path) {
    svg += "<polyline points=\"" + cv.points(*drawing.path) + "\" fill=\"none\" stroke=\"blue\" stroke-width=\"" +
           stroke + "\"/>\n";
  }
  for (Cell g : drawing.goals) {
    svg += "<polygon points=\"" + star(cv.cx(g), cv.cy(g), mark) + "\" fill=\"red\"/>\n";
  }
  const double bx = cv.cx(drawing.base), by = cv.cy(drawing.base);
  svg += "<polygon points=\"" + num(bx) + "," + num(by - mark) + " " + num(bx - mark) + "," + num(by + mark) + " " +
         num(bx + mark) + "," + num(by + mark) + "\" fill=\"red\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace tetherplan::cli
