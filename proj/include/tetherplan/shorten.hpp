#pragma once

#include "tetherplan/curve.hpp"
#include "tetherplan/gridmap.hpp"

namespace tetherplan {

/// Untethered path shortening: pulls a curve taut within its homotopy class.
///
/// Every accepted shortcut is a Bresenham segment that is free in `mask` and whose
/// loop with the replaced sub-curve has an empty reduced signature. The result keeps
/// both endpoints and the signature, is never longer than the input, and is a fixed
/// point (shortening it again returns it unchanged). Vertices are normalised: no
/// repeated or collinear-interior points.
///
/// Throws PreconditionError if a segment of `p` is not free in `mask`.
Polyline shorten(const Polyline& p, const GridWorld& world, Mask mask);

struct TautTether {
  Polyline tether;
  double length = 0.0;
};

/// Canonical tether for a raw base-anchored curve: shortened in the collision-free mask.
TautTether taut_tether(Cell base, const Polyline& raw, const GridWorld& world);

/// True iff two non-adjacent segments cross, touch transversally, or overlap along a
/// positive length.
bool is_self_crossing(const Polyline& p);

}  // namespace tetherplan
