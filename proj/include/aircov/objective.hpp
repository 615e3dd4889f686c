#pragma once

#include <cstddef>
#include <vector>

#include "aircov/geom/polygon.hpp"
#include "aircov/geom/quadrature.hpp"
#include "aircov/partition.hpp"
#include "aircov/sensing.hpp"

namespace aircov::objective {

struct GaussianComponent {
    double weight = 1.0;
    geom::Vec2 center{0.0, 0.0};
    double sigma = 1.0;
};

struct DensityField {
    enum class Kind { Uniform, GaussianMixture };
    Kind kind = Kind::Uniform;
    double value = 1.0;
    std::vector<GaussianComponent> components;

    static DensityField uniform(double value);
    static DensityField gaussian_mixture(std::vector<GaussianComponent> components);
};

struct Metrics {
    double H = 0.0;
    double covered_fraction = 0.0;
    std::vector<double> per_agent_cell_area; // in the agents' order
};

double density_eval(const DensityField& phi, geom::Vec2 q);

// Area-quadrature settings that resolve the density's finest length scale.
// Integrals of φ over cells should all go through this so objective values
// and gradients stay mutually consistent.
geom::QuadratureOptions density_quadrature(const DensityField& phi);

// Batch evaluation through the runtime-selected kernel backend.
void density_eval_batch(const DensityField& phi, const double* xs, const double* ys, std::size_t n,
                        double* out);

Metrics evaluate_objective(const partition::PartitionResult& part,
                           const std::vector<sensing::AgentState>& agents, const DensityField& phi,
                           const sensing::AltitudeBounds& bounds);

} // namespace aircov::objective
