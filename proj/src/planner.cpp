#include "tetherplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "tetherplan/errors.hpp"
#include "tetherplan/shorten.hpp"

namespace tetherplan {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

class Stopwatch {
 public:
  explicit Stopwatch(double& sink) : sink_(sink), t0_(Clock::now()) {}
  ~Stopwatch() { sink_ += ms_since(t0_); }
  Stopwatch(const Stopwatch&) = delete;
  Stopwatch& operator=(const Stopwatch&) = delete;

 private:
  double& sink_;
  Clock::time_point t0_;
};

std::string describe(const std::vector<Cell>& cells) {
  std::string out;
  for (const Cell& c : cells) {
    if (!out.empty()) out += ", ";
    out += "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
  }
  return out;
}

struct Prepared {
  GcpResult gcp;
  std::vector<std::size_t> reachable;  // indices into the goal list, request order
};

Prepared prepare(const GridWorld& world, Cell base, std::span<const Cell> goals, double max_length,
                 OnUnreachable policy, Solution& sol) {
  if (goals.empty()) throw PreconditionError("planner: no goals given");
  Prepared p;
  {
    Stopwatch sw(sol.timings.gcp_ms);
    p.gcp = gcp(world, base, goals, max_length);
  }
  for (std::size_t i = 0; i < goals.size(); ++i) {
    const auto& g = p.gcp.goals[i];
    sol.per_goal.push_back({goals[i], g.configurations.size(), kNotChosen, 0.0});
    if (g.reachable) {
      p.reachable.push_back(i);
    } else {
      sol.skipped.push_back(goals[i]);
    }
  }
  if (!sol.skipped.empty()) {
    if (policy == OnUnreachable::Fail) throw UnreachableError("unreachable goals: " + describe(sol.skipped));
    spdlog::info("skipping unreachable goals: {}", describe(sol.skipped));
  }
  return p;
}

void choose(Solution& sol, const Prepared& p, std::size_t goal, std::size_t index) {
  const Configuration& c = p.gcp.goals[goal].configurations[index];
  sol.per_goal[goal].chosen_index = index;
  sol.per_goal[goal].tether_length = c.tether_length;
  sol.visit_order.push_back(goal);
  sol.visited.push_back(c);
}

}  // namespace

Polyline tr(const Configuration& c1, const Configuration& c2, const GridWorld& world, double max_length) {
  if (c1.base != c2.base) throw PreconditionError("tr: configurations have different bases");
  if (c1.tether_length > max_length + 1e-9 || c2.tether_length > max_length + 1e-9) {
    throw PreconditionError("tr: configuration exceeds the tether length");
  }
  return shorten(concat(reverse(c1.tether), c2.tether), world, Mask::CFree);
}

std::vector<std::pair<std::size_t, double>> induced_tether_profile(const Configuration& c1, const Polyline& motion,
                                                                   const GridWorld& world) {
  if (motion.front() != c1.location) throw PreconditionError("induced_tether_profile: motion does not start at the robot");
  std::vector<std::pair<std::size_t, double>> out{{0, c1.tether_length}};
  Polyline tether = c1.tether;
  for (std::size_t s = 1; s < motion.size(); ++s) {
    tether = shorten(concat(tether, Polyline({motion[s - 1], motion[s]})), world, Mask::CFree);
    out.emplace_back(s, length(tether));
  }
  return out;
}

double min_required_tether(const Configuration& c1, const Configuration& c2) {
  if (c1.base != c2.base) throw PreconditionError("min_required_tether: configurations have different bases");
  return std::max(c1.tether_length, c2.tether_length);
}

std::size_t tmv_ups_count(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) total += counts[i - 1] * counts[i];
  return total;
}

std::size_t ttsp_ups_count(std::span<const std::size_t> counts) {
  const std::size_t sum = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  std::size_t squares = 0;
  for (const std::size_t n : counts) squares += n * n;
  return sum * sum - squares;
}

Solution tp(const Configuration& start, Cell goal, double max_length, const GridWorld& world) {
  const auto t0 = Clock::now();
  Solution sol;
  GcpResult found;
  {
    Stopwatch sw(sol.timings.gcp_ms);
    const Cell goals[] = {goal};
    found = gcp(world, start.base, goals, max_length);
  }
  const auto& configs = found.goals[0].configurations;
  sol.per_goal.push_back({goal, configs.size(), kNotChosen, 0.0});
  if (configs.empty()) throw UnreachableError("tp: goal (" + std::to_string(goal.x) + ", " + std::to_string(goal.y) + ") is unreachable");

  std::size_t best = 0;
  Polyline best_path{start.location};
  double best_length = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < configs.size(); ++j) {
    Polyline motion{start.location};
    {
      Stopwatch sw(sol.timings.ups_ms);
      motion = tr(start, configs[j], world);
    }
    ++sol.ups_calls;
    const double len = length(motion);
    if (len < best_length) {
      best_length = len;
      best = j;
      best_path = std::move(motion);
    }
  }
  sol.path = std::move(best_path);
  sol.total_length = best_length;
  sol.per_goal[0].chosen_index = best;
  sol.per_goal[0].tether_length = configs[best].tether_length;
  sol.visit_order.push_back(0);
  sol.visited.push_back(configs[best]);
  sol.timings.total_ms = ms_since(t0);
  return sol;
}

Solution tmv(const GridWorld& world, Cell base, std::span<const Cell> goals, double max_length, OnUnreachable policy) {
  const auto t0 = Clock::now();
  Solution sol;
  const Prepared p = prepare(world, base, goals, max_length, policy, sol);
  const auto& r = p.reachable;
  if (r.empty()) {
    sol.path = Polyline(base);
    sol.timings.total_ms = ms_since(t0);
    return sol;
  }
  auto configs = [&](std::size_t stage) -> const std::vector<Configuration>& {
    return p.gcp.goals[r[stage]].configurations;
  };

  // gamma[i](k, j): motion from configuration k at stage i-1 to j at stage i.
  std::vector<std::vector<std::vector<Polyline>>> gamma(r.size());
  std::vector<std::vector<double>> best(r.size());
  std::vector<std::vector<std::size_t>> from(r.size());
  for (const Configuration& c : configs(0)) best[0].push_back(c.tether_length);
  for (std::size_t i = 1; i < r.size(); ++i) {
    const auto& prev = configs(i - 1);
    const auto& next = configs(i);
    gamma[i].assign(prev.size(), {});
    {
      Stopwatch sw(sol.timings.ups_ms);
      for (std::size_t k = 0; k < prev.size(); ++k) {
        for (std::size_t j = 0; j < next.size(); ++j) gamma[i][k].push_back(tr(prev[k], next[j], world));
      }
    }
    sol.ups_calls += prev.size() * next.size();
    Stopwatch sw(sol.timings.combinatorial_ms);
    best[i].assign(next.size(), std::numeric_limits<double>::infinity());
    from[i].assign(next.size(), 0);
    for (std::size_t j = 0; j < next.size(); ++j) {
      for (std::size_t k = 0; k < prev.size(); ++k) {
        const double c = best[i - 1][k] + length(gamma[i][k][j]);
        if (c < best[i][j]) {
          best[i][j] = c;
          from[i][j] = k;
        }
      }
    }
  }

  std::vector<std::size_t> pick(r.size());
  {
    Stopwatch sw(sol.timings.combinatorial_ms);
    const std::size_t last = r.size() - 1;
    double total = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < configs(last).size(); ++j) {
      const double c = best[last][j] + configs(last)[j].tether_length;
      if (c < total) {
        total = c;
        pick[last] = j;
      }
    }
    for (std::size_t i = last; i > 0; --i) pick[i - 1] = from[i][pick[i]];
  }

  Polyline path = configs(0)[pick[0]].tether;
  choose(sol, p, r[0], pick[0]);
  for (std::size_t i = 1; i < r.size(); ++i) {
    path = concat(path, gamma[i][pick[i - 1]][pick[i]]);
    choose(sol, p, r[i], pick[i]);
  }
  path = concat(path, reverse(configs(r.size() - 1)[pick.back()].tether));
  sol.total_length = length(path);
  sol.path = std::move(path);
  sol.timings.total_ms = ms_since(t0);
  return sol;
}

std::vector<std::size_t> gtsp_solve(const std::vector<std::vector<double>>& cost, const std::vector<std::size_t>& cluster,
                                    std::size_t start) {
  const std::size_t n = cost.size();
  if (cluster.size() != n || start >= n) throw PreconditionError("gtsp_solve: malformed input");
  const std::size_t clusters = cluster.empty() ? 0 : *std::max_element(cluster.begin(), cluster.end()) + 1;
  std::vector<std::vector<std::size_t>> members(clusters);
  for (std::size_t v = 0; v < n; ++v) members[cluster[v]].push_back(v);
  for (const auto& m : members) {
    if (m.empty()) throw PreconditionError("gtsp_solve: empty cluster");
  }
  if (members[cluster[start]].size() != 1) throw PreconditionError("gtsp_solve: start cluster must hold only the start");

  // Bit b stands for the b-th cluster other than the start's.
  std::vector<int> bit(clusters, -1);
  int bits = 0;
  for (std::size_t c = 0; c < clusters; ++c) {
    if (c != cluster[start]) bit[c] = bits++;
  }
  if (bits > 20) throw PreconditionError("gtsp_solve: too many clusters");
  const std::size_t full = (std::size_t{1} << bits) - 1;
  const double inf = std::numeric_limits<double>::infinity();

  // rest[mask][v]: cheapest way to finish the tour from v once the clusters in mask are visited.
  std::vector<std::vector<double>> rest(full + 1, std::vector<double>(n, inf));
  for (std::size_t v = 0; v < n; ++v) {
    if (v != start) rest[full][v] = cost[v][start];
  }
  auto mask_bit = [&](std::size_t v) { return std::size_t{1} << bit[cluster[v]]; };
  for (std::size_t mask = full; mask-- > 0;) {
    for (std::size_t v = 0; v < n; ++v) {
      if (v != start && !(mask & mask_bit(v))) continue;
      double b = inf;
      for (std::size_t u = 0; u < n; ++u) {
        if (u == start || (mask & mask_bit(u))) continue;
        b = std::min(b, cost[v][u] + rest[mask | mask_bit(u)][u]);
      }
      rest[mask][v] = b;
    }
  }
  if (full == 0) return {start, start};

  std::vector<std::size_t> tour{start};
  std::size_t mask = 0;
  std::size_t v = start;
  while (mask != full) {
    const double target = rest[mask][v];
    const double slack = 1e-9 * std::max(1.0, std::abs(target));
    for (std::size_t u = 0; u < n; ++u) {
      if (u == start || (mask & mask_bit(u))) continue;
      if (cost[v][u] + rest[mask | mask_bit(u)][u] <= target + slack) {
        mask |= mask_bit(u);
        v = u;
        tour.push_back(u);
        break;
      }
    }
  }
  tour.push_back(start);
  return tour;
}

Solution ttsp(const GridWorld& world, Cell base, std::span<const Cell> goals, double max_length, OnUnreachable policy) {
  const auto t0 = Clock::now();
  Solution sol;
  const Prepared p = prepare(world, base, goals, max_length, policy, sol);
  if (p.reachable.empty()) {
    sol.path = Polyline(base);
    sol.timings.total_ms = ms_since(t0);
    return sol;
  }

  // Node 0 is home; then every configuration of every reachable goal, cluster by cluster.
  struct Node {
    std::size_t goal;
    std::size_t index;
  };
  std::vector<Node> nodes{{kNotChosen, 0}};
  std::vector<std::size_t> cluster{0};
  std::vector<std::size_t> counts;
  for (std::size_t c = 0; c < p.reachable.size(); ++c) {
    const std::size_t g = p.reachable[c];
    counts.push_back(p.gcp.goals[g].configurations.size());
    for (std::size_t j = 0; j < counts.back(); ++j) {
      nodes.push_back({g, j});
      cluster.push_back(c + 1);
    }
  }
  auto config = [&](std::size_t v) -> const Configuration& {
    return p.gcp.goals[nodes[v].goal].configurations[nodes[v].index];
  };

  const std::size_t n = nodes.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, inf));
  std::vector<std::vector<Polyline>> motion(n, std::vector<Polyline>(n, Polyline(base)));
  for (std::size_t v = 1; v < n; ++v) {
    cost[0][v] = cost[v][0] = config(v).tether_length;
  }
  {
    Stopwatch sw(sol.timings.ups_ms);
    for (std::size_t u = 1; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (cluster[u] == cluster[v]) continue;
        motion[u][v] = tr(config(u), config(v), world);
        motion[v][u] = reverse(motion[u][v]);
        cost[u][v] = cost[v][u] = length(motion[u][v]);
      }
    }
  }
  sol.ups_calls = ttsp_ups_count(counts);

  std::vector<std::size_t> tour;
  {
    Stopwatch sw(sol.timings.combinatorial_ms);
    tour = gtsp_solve(cost, cluster, 0);
  }

  Polyline path = config(tour[1]).tether;
  for (std::size_t k = 1; k + 1 < tour.size(); ++k) {
    const Node& node = nodes[tour[k]];
    choose(sol, p, node.goal, node.index);
    if (k + 2 < tour.size()) path = concat(path, motion[tour[k]][tour[k + 1]]);
  }
  path = concat(path, reverse(config(tour[tour.size() - 2]).tether));
  sol.total_length = length(path);
  sol.path = std::move(path);
  sol.timings.total_ms = ms_since(t0);
  return sol;
}

}  // namespace tetherplan
