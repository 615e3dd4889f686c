#include "aircov/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "aircov/partition.hpp"

namespace aircov::sim {

using geom::Vec2;
using sensing::AgentState;

geom::Vec2 project_into_region(Vec2 q, const geom::MultiPolygon& region) {
    if (geom::contains_point(region, q)) return q;
    double best_d2 = std::numeric_limits<double>::infinity();
    Vec2 best = q;
    for (const auto& poly : region.parts) {
        const auto& ring = poly.outer.pts;
        for (std::size_t k = 0; k < ring.size(); ++k) {
            const Vec2 a = ring[k];
            const Vec2 b = ring[(k + 1) % ring.size()];
            const Vec2 ab = b - a;
            const double len2 = ab.norm2();
            const double t = len2 > 0.0 ? std::clamp((q - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
            const Vec2 p = a + ab * t;
            const double d2 = (q - p).norm2();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = p;
            }
        }
    }
    return best;
}

namespace {

double input_norm(const control::ControlInput& u) {
    return std::sqrt(u.u_q.norm2() + u.u_z * u.u_z + u.omega * u.omega);
}

// One step given the partition of `states` on the control-side base pattern.
// On return `ctrl_part` holds the partition of the NEW states on that same
// base, so the caller can feed it straight into the next step.
StepRecord step_from(const std::vector<AgentState>& states, const Scene& scene,
                     const control::Gains& gains, const SimConfig& config, double t_new,
                     const sensing::BasePattern& ctrl_base,
                     partition::PartitionResult& ctrl_part) {
    const auto cb = partition::classify_boundaries(ctrl_part, states, ctrl_base, scene.bounds);

    StepRecord rec;
    rec.t = t_new;
    rec.states = states;
    rec.inputs.reserve(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        control::ControlInput u;
        u.u_q = control::control_planar(states[k].id, cb, states, scene.phi, scene.bounds, gains);
        u.u_z = control::control_altitude(states[k].id, cb, ctrl_part, states, scene.phi,
                                          scene.bounds, gains);
        u.omega = config.mode == Mode::Full
                      ? control::control_yaw(states[k].id, cb, states, ctrl_base, scene.phi,
                                             scene.bounds, gains)
                      : 0.0;
        rec.inputs.push_back(u);

        AgentState& a = rec.states[k];
        a.q = project_into_region(a.q + u.u_q * config.dt, scene.region);
        a.z = std::clamp(a.z + u.u_z * config.dt, scene.bounds.z_min, scene.bounds.z_max);
        a.theta += u.omega * config.dt;
    }

    ctrl_part = partition::compute_partition(rec.states, ctrl_base, scene.region, scene.bounds);
    if (config.mode == Mode::InscribedDisk) {
        const auto part_new =
            partition::compute_partition(rec.states, scene.base, scene.region, scene.bounds);
        rec.metrics = objective::evaluate_objective(part_new, rec.states, scene.phi, scene.bounds);
        rec.control_H =
            objective::evaluate_objective(ctrl_part, rec.states, scene.phi, scene.bounds).H;
    } else {
        rec.metrics = objective::evaluate_objective(ctrl_part, rec.states, scene.phi, scene.bounds);
        rec.control_H = rec.metrics.H;
    }
    return rec;
}

} // namespace

StepRecord step(const std::vector<AgentState>& states, const Scene& scene,
                const control::Gains& gains, const SimConfig& config, double t_new) {
    const sensing::BasePattern ctrl_base =
        config.mode == Mode::InscribedDisk ? sensing::inscribed_disk_pattern(scene.base)
                                           : scene.base;
    auto ctrl_part = partition::compute_partition(states, ctrl_base, scene.region, scene.bounds);
    return step_from(states, scene, gains, config, t_new, ctrl_base, ctrl_part);
}

TrajectoryLog run(const Scene& scene, const control::Gains& gains, const SimConfig& config) {
    if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (config.max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
    if (!(config.convergence_tol >= 0.0)) throw std::invalid_argument("convergence_tol must be >= 0");

    const sensing::BasePattern ctrl_base =
        config.mode == Mode::InscribedDisk ? sensing::inscribed_disk_pattern(scene.base)
                                           : scene.base;

    TrajectoryLog log;
    auto ctrl_part =
        partition::compute_partition(scene.agents, ctrl_base, scene.region, scene.bounds);
    if (config.mode == Mode::InscribedDisk) {
        const auto part0 =
            partition::compute_partition(scene.agents, scene.base, scene.region, scene.bounds);
        log.initial_metrics =
            objective::evaluate_objective(part0, scene.agents, scene.phi, scene.bounds);
        log.initial_control_H =
            objective::evaluate_objective(ctrl_part, scene.agents, scene.phi, scene.bounds).H;
    } else {
        log.initial_metrics =
            objective::evaluate_objective(ctrl_part, scene.agents, scene.phi, scene.bounds);
        log.initial_control_H = log.initial_metrics.H;
    }

    double h_prev = log.initial_control_H;
    std::vector<AgentState> states = scene.agents;
    for (int k = 1; k <= config.max_steps; ++k) {
        StepRecord rec = step_from(states, scene, gains, config, k * config.dt, ctrl_base, ctrl_part);
        if (rec.control_H < h_prev - 1e-6 * std::abs(h_prev)) ++log.ascent_violations;
        h_prev = rec.control_H;
        states = rec.states;

        double max_norm = 0.0;
        for (const auto& u : rec.inputs) max_norm = std::max(max_norm, input_norm(u));
        log.records.push_back(std::move(rec));
        if (max_norm < config.convergence_tol) {
            log.converged = true;
            break;
        }
    }
    return log;
}

} // namespace aircov::sim
