#pragma once

#include <functional>

#include "aircov/geom/polygon.hpp"

namespace aircov::geom {

struct QuadratureOptions {
    int line_order = 3;            // Gauss-Legendre points per edge, 1..5
    int tri_degree = 4;            // triangle rule exactness: 4 (6 pts) or 6 (12 pts)
    double max_tri_diameter = 0.0; // subdivide triangles above this diameter; 0 = off
};

/// ∫ w(s) n(s) ds over the listed edges, with n the outward unit normal of
/// each edge (right of a->b).  Gauss-Legendre with `order` points per edge.
Vec2 line_integral_vector(std::span<const LabeledEdge> edges,
                          const std::function<double(Vec2)>& w, int order = 3);

/// ∫ w(s) F(s)·n(s) ds over the listed edges.
double line_integral_flux(std::span<const LabeledEdge> edges,
                          const std::function<Vec2(Vec2)>& F,
                          const std::function<double(Vec2)>& w, int order = 3);

/// ∫_p w dA via ear-clipping triangulation and symmetric triangle rules.
/// Holes are integrated separately and subtracted.
double area_integral(const MultiPolygon& p, const std::function<double(Vec2)>& w,
                     const QuadratureOptions& opts = {});

/// The evaluation points and weights area_integral(p, ·, opts) would use;
/// lets callers batch-evaluate the integrand.  Weights sum to area(p) and
/// carry sign (negative over holes).
void collect_area_quadrature(const MultiPolygon& p, const QuadratureOptions& opts,
                             std::vector<Vec2>& points, std::vector<double>& weights);

} // namespace aircov::geom
