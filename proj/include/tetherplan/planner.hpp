#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "tetherplan/curve.hpp"
#include "tetherplan/gcp.hpp"
#include "tetherplan/gridmap.hpp"

namespace tetherplan {

/// Discretisation slack for tether-length comparisons along a motion.
inline constexpr double kGridEpsilon = 2.8284271247461903;

enum class OnUnreachable { Skip, Fail };

struct Timings {
  double gcp_ms = 0.0;
  double ups_ms = 0.0;
  double combinatorial_ms = 0.0;
  double total_ms = 0.0;
};

inline constexpr std::size_t kNotChosen = std::numeric_limits<std::size_t>::max();

struct GoalChoice {
  Cell goal;
  std::size_t n_configs = 0;
  std::size_t chosen_index = kNotChosen;
  double tether_length = 0.0;
};

struct Solution {
  Polyline path{Cell{}};
  double total_length = 0.0;
  /// One entry per requested goal, in request order.
  std::vector<GoalChoice> per_goal;
  /// Indices into per_goal in the order the goals are visited.
  std::vector<std::size_t> visit_order;
  std::vector<Cell> skipped;
  std::size_t ups_calls = 0;
  Timings timings;
  /// Configurations at the visited goals, in visit order.
  std::vector<Configuration> visited;
};

/// Shortest reconfiguration motion from c1 to c2: the C-shortening of reverse(c1) + c2.
/// Throws PreconditionError on a base mismatch or when either tether exceeds max_length.
Polyline tr(const Configuration& c1, const Configuration& c2, const GridWorld& world,
            double max_length = std::numeric_limits<double>::infinity());

/// Tether length after each vertex of `motion`, dragging c1's tether along it. Entry s is
/// (s, length of the taut tether once the robot reaches motion[s]).
/// Throws PreconditionError if the motion does not start at c1's location.
std::vector<std::pair<std::size_t, double>> induced_tether_profile(const Configuration& c1, const Polyline& motion,
                                                                   const GridWorld& world);

/// Throws PreconditionError on a base mismatch.
double min_required_tether(const Configuration& c1, const Configuration& c2);

/// Best admissible motion from `start` to any configuration at `goal`.
/// Throws UnreachableError when the goal has no admissible configuration.
Solution tp(const Configuration& start, Cell goal, double max_length, const GridWorld& world);

/// Visits the goals in the given order, starting and ending at the home configuration.
/// Unreachable goals are skipped, or reported through UnreachableError with OnUnreachable::Fail.
Solution tmv(const GridWorld& world, Cell base, std::span<const Cell> goals, double max_length,
             OnUnreachable policy = OnUnreachable::Skip);

/// Shortest closed tour from home visiting every goal once, in any order.
Solution ttsp(const GridWorld& world, Cell base, std::span<const Cell> goals, double max_length,
              OnUnreachable policy = OnUnreachable::Skip);

/// Exact generalised TSP by dynamic programming over (visited clusters, node).
///
/// `cost` is a square matrix over all nodes, `cluster[v]` the cluster of node v. The tour
/// starts and ends at `start`, whose cluster holds only it, and visits one node of every
/// other cluster. Among optimal tours the lexicographically smallest node sequence wins.
/// Returns the node sequence including `start` at both ends.
/// Throws PreconditionError if a cluster is empty or the start cluster holds other nodes.
std::vector<std::size_t> gtsp_solve(const std::vector<std::vector<double>>& cost, const std::vector<std::size_t>& cluster,
                                    std::size_t start);

/// Closed-form UPS counts.
std::size_t tmv_ups_count(std::span<const std::size_t> counts);
std::size_t ttsp_ups_count(std::span<const std::size_t> counts);

}  // namespace tetherplan
