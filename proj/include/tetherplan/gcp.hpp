#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tetherplan/curve.hpp"
#include "tetherplan/gridmap.hpp"
#include "tetherplan/homotopy.hpp"

namespace tetherplan {

/// Robot location plus the taut tether anchored at the base.
struct Configuration {
  Cell base;
  Cell location;
  Polyline tether{Cell{}};
  double tether_length = 0.0;
  HSignature signature;
};

/// Wraps an already shortened tether. Computes its length and signature.
Configuration make_configuration(const GridWorld& world, Polyline tether);

/// Zero-length configuration at the base. Throws PreconditionError if base is not in C.
Configuration home_configuration(const GridWorld& world, Cell base);

struct GoalConfigurations {
  Cell goal;
  bool reachable = false;
  /// Sorted by tether length, then signature.
  std::vector<Configuration> configurations;
};

struct GcpResult {
  std::vector<GoalConfigurations> goals;
  std::size_t states_settled = 0;
  std::size_t goal_states = 0;
};

inline constexpr double kGcpPruneFactor = 1.1;

/// All admissible configurations at each goal: one per homotopy class whose taut tether
/// (shortened in C) is at most `max_length` and does not cross itself.
///
/// Uniform-cost search over (cell, reduced word) from the base, 8-connected within C.
/// States whose grid cost cannot stay within kGcpPruneFactor * max_length are dropped.
/// Goals outside C come back empty and unreachable.
/// Throws PreconditionError if the base is not in C or max_length <= 0.
GcpResult gcp(const GridWorld& world, Cell base, std::span<const Cell> goals, double max_length);

}  // namespace tetherplan
