#pragma once

#include <vector>

#include "aircov/control.hpp"
#include "aircov/objective.hpp"
#include "aircov/scene.hpp"

namespace aircov::sim {

enum class Mode {
    InscribedDisk, // control sees the largest inscribed disk, yaw pinned to zero
    FixedYaw,      // true pattern, yaw pinned to zero
    Full,          // true pattern, all three inputs active
};

struct SimConfig {
    double dt = 1e-2;
    int max_steps = 3000;
    double convergence_tol = 1e-4; // stop when every agent's input norm drops below
    Mode mode = Mode::Full;
};

// One executed step: the states it produced, the inputs that produced them,
// and metrics of the produced states on the exact footprints.  control_H is
// the objective of the pattern the controller actually sees, which only
// differs from metrics.H in InscribedDisk mode; ascent is guaranteed for it,
// not for the exact-footprint value.
struct StepRecord {
    double t = 0.0;
    std::vector<sensing::AgentState> states;
    std::vector<control::ControlInput> inputs;
    objective::Metrics metrics;
    double control_H = 0.0;
};

struct TrajectoryLog {
    objective::Metrics initial_metrics;
    double initial_control_H = 0.0;
    std::vector<StepRecord> records;
    int ascent_violations = 0; // steps with ΔH < −1e−6·|H| on control_H
    bool converged = false;
};

// Closest point of the convex region to q (q itself when inside).
geom::Vec2 project_into_region(geom::Vec2 q, const geom::MultiPolygon& region);

// Single synchronous Euler step from `states`: inputs from a common snapshot,
// then q projected into the region, z clamped to the bounds, θ advanced.
// Returns the record for the new state at the given timestamp.
StepRecord step(const std::vector<sensing::AgentState>& states, const Scene& scene,
                const control::Gains& gains, const SimConfig& config, double t_new);

// Iterates step() until every input norm falls below convergence_tol or
// max_steps is reached, tallying ascent violations along the way.
TrajectoryLog run(const Scene& scene, const control::Gains& gains, const SimConfig& config);

} // namespace aircov::sim
