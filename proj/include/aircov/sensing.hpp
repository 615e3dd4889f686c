#pragma once

#include <vector>

#include "aircov/geom/polygon.hpp"

namespace aircov::sensing {

using geom::MultiPolygon;
using geom::Ring;
using geom::Vec2;

struct AltitudeBounds {
    double z_min = 0.0;
    double z_max = 0.0;
    double range() const { return z_max - z_min; }
    bool valid() const { return z_min > 0.0 && z_max > z_min; }
};

/// Common downward-facing sensing pattern at the minimum altitude, given in
/// body coordinates with the origin strictly inside.
struct BasePattern {
    enum class Kind { Ellipse, ConvexPolygon };

    Kind kind = Kind::Ellipse;
    double a = 0.0, b = 0.0; // ellipse semi-axes (Kind::Ellipse only)
    Ring sampled;            // CCW; edge labels carry the parameter span
    double r_b_min = 0.0;    // min distance from the origin to the boundary
    // Disks look the same under yaw, so the yaw input has no effect on
    // coverage and is pinned to zero by the control law.
    bool rotation_invariant = false;
};

/// Elliptical pattern sampled uniformly in the angle parameter k, vertex j at
/// (a·cos k_j, b·sin k_j), k_j = 2πj/n_disc.  Throws std::invalid_argument on
/// non-positive axes or n_disc < 3.
BasePattern make_ellipse_pattern(double a, double b, int n_disc = 60);

/// Pattern from explicit convex CCW vertices containing the origin strictly.
/// Parameter anchors are vertex indices.  Throws std::invalid_argument if the
/// polygon is not convex or the origin is not strictly interior.
BasePattern make_polygon_pattern(std::vector<Vec2> vertices);

/// Largest origin-centered inscribed disk of the pattern, sampled with the
/// same vertex count.
BasePattern inscribed_disk_pattern(const BasePattern& base);

struct AgentState {
    int id = 0;
    Vec2 q{0.0, 0.0}; // planar position
    double z = 0.0;   // altitude
    double theta = 0.0;
};

/// Sensed region q + R(theta) · (z/z_min) · C^b.  Every edge is labeled
/// FOOTPRINT(agent.id) with its parameter span.  Throws std::invalid_argument
/// if agent.z is outside bounds.
MultiPolygon footprint(const AgentState& agent, const BasePattern& base,
                       const AltitudeBounds& bounds);

/// Coverage quality ((z−z_min)² − (z_max−z_min)²)² / (z_max−z_min)⁴, equal to
/// 1 at z_min and 0 at z_max, strictly decreasing in between.  Throws
/// std::invalid_argument for z outside [z_min, z_max].
double quality(double z, const AltitudeBounds& bounds);

/// d quality / dz = 4(z−z_min)[(z−z_min)² − (z_max−z_min)²] / (z_max−z_min)⁴,
/// in [−8√3/(9(z_max−z_min)), 0] on the valid range.
double quality_derivative(double z, const AltitudeBounds& bounds);

struct Mat2 {
    double m00 = 0, m01 = 0, m10 = 0, m11 = 0;
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    Vec2 apply(Vec2 v) const { return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y}; }
};

/// ∂q/∂q_i for q on the agent's own footprint boundary: the identity.
/// (On another agent's arc the correct value is the zero matrix; callers
/// restrict these fields to own-boundary points.)
Mat2 boundary_velocity_planar(Vec2 q, const AgentState& agent);

/// ∂q/∂z_i = (q − q_i)/z_i for q on the agent's own footprint boundary.
Vec2 boundary_velocity_altitude(Vec2 q, const AgentState& agent);

/// ∂q/∂θ_i = J(q − q_i), J the 90° CCW rotation.
Vec2 boundary_velocity_yaw(Vec2 q, const AgentState& agent);

} // namespace aircov::sensing
