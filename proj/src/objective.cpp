#include "aircov/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aircov/geom/quadrature.hpp"
#include "aircov/kernels/kernels.hpp"

namespace aircov::objective {

DensityField DensityField::uniform(double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument("uniform density must be positive and finite");
    DensityField f;
    f.kind = Kind::Uniform;
    f.value = value;
    return f;
}

DensityField DensityField::gaussian_mixture(std::vector<GaussianComponent> components) {
    if (components.empty()) throw std::invalid_argument("mixture needs at least one component");
    for (const auto& c : components)
        if (!(c.weight > 0.0) || !(c.sigma > 0.0))
            throw std::invalid_argument("mixture weights and sigmas must be positive");
    DensityField f;
    f.kind = Kind::GaussianMixture;
    f.components = std::move(components);
    return f;
}

double density_eval(const DensityField& phi, geom::Vec2 q) {
    if (phi.kind == DensityField::Kind::Uniform) return phi.value;
    double s = 0.0;
    for (const auto& c : phi.components) {
        const double d2 = (q - c.center).norm2();
        s += c.weight * std::exp(-d2 / (2.0 * c.sigma * c.sigma)) /
             (2.0 * std::numbers::pi * c.sigma * c.sigma);
    }
    return s;
}

void density_eval_batch(const DensityField& phi, const double* xs, const double* ys, std::size_t n,
                        double* out) {
    if (phi.kind == DensityField::Kind::Uniform) {
        std::fill(out, out + n, phi.value);
        return;
    }
    std::vector<kernels::GaussComponent> comps;
    comps.reserve(phi.components.size());
    for (const auto& c : phi.components)
        comps.push_back({c.center.x, c.center.y, 1.0 / (2.0 * c.sigma * c.sigma),
                         c.weight / (2.0 * std::numbers::pi * c.sigma * c.sigma)});
    kernels::active_backend().gaussian_mixture(xs, ys, n, comps.data(), comps.size(), out);
}

geom::QuadratureOptions density_quadrature(const DensityField& phi) {
    geom::QuadratureOptions opts;
    if (phi.kind != DensityField::Kind::GaussianMixture) return opts;
    double sigma_min = phi.components.front().sigma;
    for (const auto& c : phi.components) sigma_min = std::min(sigma_min, c.sigma);
    // Half a standard deviation puts the degree-6 rule deep in its asymptotic
    // range; the cap only bites on triangles that are actually large on the
    // density's scale.
    opts.tri_degree = 6;
    opts.max_tri_diameter = 0.5 * sigma_min;
    return opts;
}

Metrics evaluate_objective(const partition::PartitionResult& part,
                           const std::vector<sensing::AgentState>& agents, const DensityField& phi,
                           const sensing::AltitudeBounds& bounds) {
    const geom::QuadratureOptions opts = density_quadrature(phi);
    auto w = [&](geom::Vec2 q) { return density_eval(phi, q); };

    Metrics m;
    double covered = 0.0;
    for (const auto& a : agents) {
        const auto& cell = part.cells.at(a.id);
        const double cell_area = geom::area(cell);
        m.per_agent_cell_area.push_back(cell_area);
        covered += cell_area;
        if (cell_area > geom::kAreaEps)
            m.H += sensing::quality(a.z, bounds) * geom::area_integral(cell, w, opts);
    }
    for (const auto& t : part.tied_regions) {
        covered += geom::area(t.region);
        m.H += t.level * geom::area_integral(t.region, w, opts);
    }
    const double region_area = covered + geom::area(part.neutral);
    m.covered_fraction = region_area > geom::kAreaEps ? covered / region_area : 0.0;
    return m;
}

} // namespace aircov::objective
