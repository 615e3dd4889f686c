#pragma once

#include <vector>

#include "aircov/objective.hpp"
#include "aircov/partition.hpp"
#include "aircov/scene.hpp"
#include "aircov/sensing.hpp"

namespace aircov::control {

struct ControlInput {
    geom::Vec2 u_q{0.0, 0.0};
    double u_z = 0.0;
    double omega = 0.0;
};

struct Gains {
    double alpha_q = 1.0;
    double alpha_z = 1.0;
    double alpha_theta = 1.0;
};

geom::Vec2 control_planar(int i, const partition::ClassifiedBoundary& cb,
                          const std::vector<sensing::AgentState>& agents,
                          const objective::DensityField& phi, const sensing::AltitudeBounds& bounds,
                          const Gains& gains);

double control_altitude(int i, const partition::ClassifiedBoundary& cb,
                        const partition::PartitionResult& part,
                        const std::vector<sensing::AgentState>& agents,
                        const objective::DensityField& phi, const sensing::AltitudeBounds& bounds,
                        const Gains& gains);

// Rotating a rotation-invariant pattern cannot change coverage, so for such
// patterns this returns exactly zero instead of integrating polygonization
// noise.
double control_yaw(int i, const partition::ClassifiedBoundary& cb,
                   const std::vector<sensing::AgentState>& agents,
                   const sensing::BasePattern& base, const objective::DensityField& phi,
                   const sensing::AltitudeBounds& bounds, const Gains& gains);

// All three laws for every agent, from one partition of the scene.
std::vector<ControlInput> compute_controls(const Scene& scene,
                                           const partition::PartitionResult& part,
                                           const partition::ClassifiedBoundary& cb,
                                           const Gains& gains);

enum class StateComponent { QX, QY, Z, Theta };

// Central finite difference of the objective along one state component of
// agent i, recomputing the partition from scratch at both ends.  Throws
// std::domain_error if a perturbed altitude leaves the bounds.
double fd_gradient_oracle(int i, StateComponent component, const Scene& scene, double delta);

// Shape fingerprint of a partition: part/hole counts per cell plus the tied
// and neutral structure.  Two partitions with different fingerprints are
// separated by a topology change, where the objective is not differentiable.
std::vector<long> topology_signature(const partition::PartitionResult& part);

// Fingerprints at state ± delta along a component; unequal results mean the
// finite difference straddles a topology change.
bool fd_crosses_topology_change(int i, StateComponent component, const Scene& scene, double delta);

} // namespace aircov::control
