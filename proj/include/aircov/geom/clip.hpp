#pragma once

#include <span>

#include "aircov/geom/polygon.hpp"

namespace aircov::geom {

/// Point set a ∩ b.  Every output edge carries the label of the input edge it
/// lies on; where edges of a and b coincide, a's label wins.  Components with
/// area below kAreaEps are dropped.
MultiPolygon intersect(const MultiPolygon& a, const MultiPolygon& b);

/// Point set a \ b.  A part of b strictly inside a becomes a hole whose edges
/// keep b's labels.
MultiPolygon difference(const MultiPolygon& a, const MultiPolygon& b);

/// Point set a ∪ b.
MultiPolygon unite(const MultiPolygon& a, const MultiPolygon& b);

/// Union of a list of regions (left fold of unite).
MultiPolygon union_all(std::span<const MultiPolygon> regions);

/// Counters for numerically degenerate events inside the boolean engine.
/// Both stay zero on well-conditioned inputs; tests assert on them.
struct ClipStats {
    long dropped_chains = 0; // kept fragments that failed to close into a ring
    long dropped_holes = 0;  // holes without a containing outer ring
    void reset() { *this = ClipStats{}; }
};
ClipStats& clip_stats();

} // namespace aircov::geom
