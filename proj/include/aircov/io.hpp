#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "aircov/control.hpp"
#include "aircov/scene.hpp"
#include "aircov/sim.hpp"

namespace aircov::io {

// Validation failure with the offending field path in the message, e.g.
// "scenario.json: agents[2].z: outside bounds [0.3, 2.3]".
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioFile {
    std::string provenance; // free-text origin note, carried through verbatim
    Scene scene;
    control::Gains gains;
    sim::SimConfig sim_config;
};

// Parse and fully validate a scenario. The region is normalized to CCW;
// non-convex regions, infeasible agents, bad bounds, and unknown keys are
// rejected with ScenarioError. parse_scenario reads a file; the _text
// variant parses a string and reports `origin` in error messages.
ScenarioFile parse_scenario(const std::string& path);
ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin = "<string>");

// Inverse of parsing: pretty-printed JSON that reparses to an identical
// ScenarioFile (defaults are emitted explicitly).
std::string serialize_scenario(const ScenarioFile& sf);

// Whole-run persistence: trajectory.csv (t,id,x,y,z,theta,u_x,u_y,u_z,omega;
// one row per step per agent), metrics.csv (t,H,covered_fraction; one row
// per step), manifest.json (scenario echo, run summary, output listing),
// and — when frames_every > 0 — an SVG frame of the initial state and of
// every Nth step. Byte-deterministic given identical logs. Returns the
// manifest text. Throws std::runtime_error on unwritable paths.
std::string write_outputs(const sim::TrajectoryLog& log, const ScenarioFile& sf,
                          const std::string& dir, int frames_every = 0);

// One SVG frame: region outline, cells in solid black with a light fill,
// tied regions in gray, footprint boundaries dashed red, agents as labeled
// markers.
std::string render_frame_svg(const std::vector<sensing::AgentState>& states,
                             const sensing::BasePattern& base,
                             const sensing::AltitudeBounds& bounds,
                             const partition::PartitionResult& part,
                             const geom::MultiPolygon& region);
void render_frame(const std::vector<sensing::AgentState>& states,
                  const sensing::BasePattern& base, const sensing::AltitudeBounds& bounds,
                  const partition::PartitionResult& part, const geom::MultiPolygon& region,
                  const std::string& path);

} // namespace aircov::io
