#pragma once

#include <vector>

#include "aircov/geom/polygon.hpp"
#include "aircov/objective.hpp"
#include "aircov/sensing.hpp"

namespace aircov {

// Everything the coverage problem is defined by: who flies where, what they
// see, over which region, and how importance is distributed.
struct Scene {
    std::vector<sensing::AgentState> agents;
    sensing::BasePattern base;
    geom::MultiPolygon region;
    sensing::AltitudeBounds bounds;
    objective::DensityField phi;
};

} // namespace aircov
