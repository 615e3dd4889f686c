#include "aircov/control.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "aircov/geom/quadrature.hpp"

namespace aircov::control {

using geom::Vec2;
using sensing::AgentState;

namespace {

const AgentState& agent_by_id(const std::vector<AgentState>& agents, int id) {
    for (const auto& a : agents)
        if (a.id == id) return a;
    throw std::invalid_argument("unknown agent id " + std::to_string(id));
}

} // namespace

Vec2 control_planar(int i, const partition::ClassifiedBoundary& cb,
                    const std::vector<AgentState>& agents, const objective::DensityField& phi,
                    const sensing::AltitudeBounds& bounds, const Gains& gains) {
    const AgentState& self = agent_by_id(agents, i);
    const double f_i = sensing::quality(self.z, bounds);
    auto w = [&](Vec2 q) { return objective::density_eval(phi, q); };

    const partition::AgentBoundary& ab = cb.per_agent.at(i);
    Vec2 u = geom::line_integral_vector(ab.free_arc, w) * f_i;
    for (const auto& [j, edges] : ab.shared_own_arc) {
        const double f_j = sensing::quality(agent_by_id(agents, j).z, bounds);
        u += geom::line_integral_vector(edges, w) * (f_i - f_j);
    }
    return u * gains.alpha_q;
}

double control_altitude(int i, const partition::ClassifiedBoundary& cb,
                        const partition::PartitionResult& part,
                        const std::vector<AgentState>& agents, const objective::DensityField& phi,
                        const sensing::AltitudeBounds& bounds, const Gains& gains) {
    const AgentState& self = agent_by_id(agents, i);
    const double f_i = sensing::quality(self.z, bounds);
    const double fd_i = sensing::quality_derivative(self.z, bounds);
    auto w = [&](Vec2 q) { return objective::density_eval(phi, q); };
    auto nu = [&](Vec2 q) { return sensing::boundary_velocity_altitude(q, self); };

    const geom::QuadratureOptions opts = objective::density_quadrature(phi);
    double u = fd_i * geom::area_integral(part.cells.at(i), w, opts);
    const partition::AgentBoundary& ab = cb.per_agent.at(i);
    u += f_i * geom::line_integral_flux(ab.free_arc, nu, w);
    for (const auto& [j, edges] : ab.shared_own_arc) {
        const double f_j = sensing::quality(agent_by_id(agents, j).z, bounds);
        u += (f_i - f_j) * geom::line_integral_flux(edges, nu, w);
    }
    return u * gains.alpha_z;
}

double control_yaw(int i, const partition::ClassifiedBoundary& cb,
                   const std::vector<AgentState>& agents, const sensing::BasePattern& base,
                   const objective::DensityField& phi, const sensing::AltitudeBounds& bounds,
                   const Gains& gains) {
    if (base.rotation_invariant) return 0.0;
    const AgentState& self = agent_by_id(agents, i);
    const double f_i = sensing::quality(self.z, bounds);
    auto w = [&](Vec2 q) { return objective::density_eval(phi, q); };
    auto tau = [&](Vec2 q) { return sensing::boundary_velocity_yaw(q, self); };

    const partition::AgentBoundary& ab = cb.per_agent.at(i);
    double u = f_i * geom::line_integral_flux(ab.free_arc, tau, w);
    for (const auto& [j, edges] : ab.shared_own_arc) {
        const double f_j = sensing::quality(agent_by_id(agents, j).z, bounds);
        u += (f_i - f_j) * geom::line_integral_flux(edges, tau, w);
    }
    return u * gains.alpha_theta;
}

std::vector<ControlInput> compute_controls(const Scene& scene,
                                           const partition::PartitionResult& part,
                                           const partition::ClassifiedBoundary& cb,
                                           const Gains& gains) {
    std::vector<ControlInput> out;
    out.reserve(scene.agents.size());
    for (const auto& a : scene.agents) {
        ControlInput u;
        u.u_q = control_planar(a.id, cb, scene.agents, scene.phi, scene.bounds, gains);
        u.u_z = control_altitude(a.id, cb, part, scene.agents, scene.phi, scene.bounds, gains);
        u.omega =
            control_yaw(a.id, cb, scene.agents, scene.base, scene.phi, scene.bounds, gains);
        out.push_back(u);
    }
    return out;
}

namespace {

Scene perturbed(const Scene& scene, int i, StateComponent component, double amount) {
    Scene s = scene;
    for (auto& a : s.agents) {
        if (a.id != i) continue;
        switch (component) {
        case StateComponent::QX: a.q.x += amount; break;
        case StateComponent::QY: a.q.y += amount; break;
        case StateComponent::Z: a.z += amount; break;
        case StateComponent::Theta: a.theta += amount; break;
        }
        if (a.z < scene.bounds.z_min || a.z > scene.bounds.z_max)
            throw std::domain_error("altitude perturbation leaves the bounds");
        return s;
    }
    throw std::invalid_argument("unknown agent id " + std::to_string(i));
}

double objective_of(const Scene& s) {
    const auto part = partition::compute_partition(s.agents, s.base, s.region, s.bounds);
    return objective::evaluate_objective(part, s.agents, s.phi, s.bounds).H;
}

} // namespace

double fd_gradient_oracle(int i, StateComponent component, const Scene& scene, double delta) {
    const double h_plus = objective_of(perturbed(scene, i, component, delta));
    const double h_minus = objective_of(perturbed(scene, i, component, -delta));
    return (h_plus - h_minus) / (2.0 * delta);
}

std::vector<long> topology_signature(const partition::PartitionResult& part) {
    std::vector<long> sig;
    for (const auto& [id, cell] : part.cells) {
        sig.push_back(id);
        sig.push_back(long(cell.parts.size()));
        long holes = 0;
        for (const auto& p : cell.parts) holes += long(p.holes.size());
        sig.push_back(holes);
    }
    sig.push_back(long(part.tied_regions.size()));
    sig.push_back(long(part.neutral.parts.size()));
    return sig;
}

bool fd_crosses_topology_change(int i, StateComponent component, const Scene& scene,
                                double delta) {
    const Scene plus = perturbed(scene, i, component, delta);
    const Scene minus = perturbed(scene, i, component, -delta);
    const auto sig_plus = topology_signature(
        partition::compute_partition(plus.agents, plus.base, plus.region, plus.bounds));
    const auto sig_minus = topology_signature(
        partition::compute_partition(minus.agents, minus.base, minus.region, minus.bounds));
    return sig_plus != sig_minus;
}

} // namespace aircov::control
