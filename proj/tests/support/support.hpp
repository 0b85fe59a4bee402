#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "tetherplan/curve.hpp"
#include "tetherplan/gridmap.hpp"
#include "tetherplan/homotopy.hpp"

namespace tetherplan::testing {

/// Random map of overlapping rectangular and disk blobs until the obstacle density is reached.
GridWorld random_blob_map(int width, int height, double density, int blobs, std::uint64_t seed);

/// Random map with exactly `obstacles` separated rectangular/disk obstacles (components may
/// still merge when blobs touch).
GridWorld random_obstacle_map(int width, int height, int obstacles, int min_size, int max_size, std::uint64_t seed);

/// Random polyline whose segments are free in `mask`. Starts at `start` when given.
Polyline random_curve(const GridWorld& world, Mask mask, std::mt19937_64& rng, int vertices, int max_step);
Polyline random_curve_from(const GridWorld& world, Mask mask, std::mt19937_64& rng, Cell start, int vertices,
                           int max_step);

Cell random_cell(const GridWorld& world, Mask mask, std::mt19937_64& rng);

/// Textbook first-octant midpoint line algorithm, reflected into the other octants,
/// evaluated with exact rational rounding (ties keep the minor coordinate).
std::vector<Cell> textbook_midpoint(Cell a, Cell b);

/// Collision-free mask recomputed by brute force over every obstacle and border cell.
std::vector<bool> brute_force_cfree(const GridWorld& world, double radius);

/// Homotopy invariant built from a different ray system: horizontal rays towards +x from
/// each component's lexicographically largest cell. Reduced.
Word horizontal_ray_word(const GridWorld& world, const Polyline& p);

/// One 8-connected grid path per homotopy class from `from` to `to` (classes told apart by
/// the horizontal-ray invariant), for every class whose cheapest grid path costs at most `bound`.
std::vector<Polyline> class_representatives(const GridWorld& world, Mask mask, Cell from, Cell to, double bound);

/// Length of the shortest polyline homotopic to `p` (same endpoints) whose vertices are cell
/// centres and whose segments are free in `mask`: exhaustive Dijkstra over (cell, word).
/// Intended for maps of at most a few hundred cells. Writes the optimal vertex path when asked.
double class_optimum_length(const GridWorld& world, Mask mask, const Polyline& p,
                            std::vector<Cell>* path = nullptr);

/// Grid cost of the cheapest 8-connected path homotopic to `p`: Dijkstra over (cell, word).
double class_grid_optimum(const GridWorld& world, Mask mask, const Polyline& p);

/// Loads a fixture map by file name from the fixtures directory.
GridWorld fixture(std::string_view name);

/// ASCII map with a single square obstacle of side `side` centred in a `size` x `size` grid.
GridWorld centred_obstacle_map(int size, int side);

}  // namespace tetherplan::testing
