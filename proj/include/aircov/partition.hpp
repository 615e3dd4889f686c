#pragma once

#include <map>
#include <set>
#include <vector>

#include "aircov/geom/polygon.hpp"
#include "aircov/sensing.hpp"

namespace aircov::partition {

// Agents whose altitudes differ by no more than this are tied: neither
// dominates, and their overlap stays unassigned.
inline constexpr double kTieEps = 1e-9;

// Offset used when probing which set lies just outside a boundary edge.
inline constexpr double kProbeOffset = 1e-6;

// An edge only counts as facing a set when its midpoint lies within this
// distance of the set's boundary.  The probe alone cannot decide that: it
// overshoots any set thinner than its offset.
inline constexpr double kAdjacencyTol = 1e-8;

struct TiedRegion {
    geom::MultiPolygon region;
    double level = 0.0; // common quality value of the members
    std::set<int> members;
};

struct PartitionResult {
    std::map<int, geom::MultiPolygon> cells;
    std::vector<TiedRegion> tied_regions;
    geom::MultiPolygon neutral;
    std::map<int, std::set<int>> neighbors;
};

// Boundary decomposition of one cell. `shared_own_arc` keys are the neighbor
// the arc is shared with; those arcs and `free_arc` lie on the agent's own
// footprint boundary, `foreign_arc` on someone else's, `on_region` on the
// region boundary.
struct AgentBoundary {
    std::vector<geom::LabeledEdge> on_region;
    std::vector<geom::LabeledEdge> free_arc;
    std::map<int, std::vector<geom::LabeledEdge>> shared_own_arc;
    std::vector<geom::LabeledEdge> foreign_arc;
};

struct ClassifiedBoundary {
    std::map<int, AgentBoundary> per_agent;
};

std::map<int, std::set<int>> compute_neighbors(const std::vector<sensing::AgentState>& agents,
                                               const sensing::BasePattern& base,
                                               const sensing::AltitudeBounds& bounds);

PartitionResult compute_partition(const std::vector<sensing::AgentState>& agents,
                                  const sensing::BasePattern& base,
                                  const geom::MultiPolygon& region,
                                  const sensing::AltitudeBounds& bounds);

// Splits own-footprint edges wherever another agent's footprint boundary
// crosses them (a cell is never clipped against higher agents, so a single
// edge can face two different sets), then classifies each piece by probing
// just outside its midpoint.  A probe hit only nominates a candidate set; the
// piece is assigned to it only if the midpoint lies within kAdjacencyTol of
// that set's boundary.  Otherwise the probe overshot a sliver thinner than
// kProbeOffset, and the piece is resolved by whichever set the midpoint
// actually touches (nearest cell, then tied regions, else free).
ClassifiedBoundary classify_boundaries(const PartitionResult& part,
                                       const std::vector<sensing::AgentState>& agents,
                                       const sensing::BasePattern& base,
                                       const sensing::AltitudeBounds& bounds);

} // namespace aircov::partition
