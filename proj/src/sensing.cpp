#include "aircov/sensing.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "aircov/geom/polygon.hpp"

namespace aircov::sensing {

using geom::EdgeLabel;
using geom::kGeomEps;

namespace {

void check_pattern_geometry(const Ring& ring) {
    if (ring.size() < 3) throw std::invalid_argument("base pattern needs >= 3 vertices");
    const std::size_t n = ring.size();
    if (ring.signed_area() <= 0.0) throw std::invalid_argument("base pattern must be CCW");
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = ring.pts[i], b = ring.pts[(i + 1) % n], c = ring.pts[(i + 2) % n];
        if (dist(a, b) <= kGeomEps) {
            throw std::invalid_argument("base pattern has coincident consecutive vertices");
        }
        if ((b - a).cross(c - b) < -kGeomEps) {
            throw std::invalid_argument("base pattern must be convex");
        }
    }
    if (!geom::point_in_ring(ring.pts, {0.0, 0.0})) {
        throw std::invalid_argument("base pattern must contain the origin");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (geom::dist_point_segment({0.0, 0.0}, ring.pts[i], ring.pts[(i + 1) % n]) <= kGeomEps) {
            throw std::invalid_argument("base pattern must contain the origin strictly");
        }
    }
}

double min_boundary_distance_to_origin(const Ring& ring) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, geom::dist_point_segment({0.0, 0.0}, ring.pts[i], ring.pts[(i + 1) % n]));
    }
    return best;
}

void check_altitude(double z, const AltitudeBounds& bounds) {
    if (!bounds.valid()) throw std::invalid_argument("altitude bounds require 0 < z_min < z_max");
    if (!(z >= bounds.z_min && z <= bounds.z_max)) {
        throw std::invalid_argument("altitude outside [z_min, z_max]");
    }
}

} // namespace

BasePattern make_ellipse_pattern(double a, double b, int n_disc) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse semi-axes must be positive");
    if (n_disc < 3) throw std::invalid_argument("n_disc must be >= 3");
    BasePattern p;
    p.kind = BasePattern::Kind::Ellipse;
    p.a = a;
    p.b = b;
    p.rotation_invariant = a == b;
    for (int j = 0; j < n_disc; ++j) {
        const double k0 = 2.0 * std::numbers::pi * j / n_disc;
        const double k1 = 2.0 * std::numbers::pi * (j + 1) / n_disc;
        p.sampled.pts.push_back({a * std::cos(k0), b * std::sin(k0)});
        p.sampled.labels.push_back(EdgeLabel::footprint(-1, k0, k1));
    }
    check_pattern_geometry(p.sampled);
    // The sampled chords dip inside the true ellipse; the pattern's inscribed
    // radius is still the analytic min(a, b).
    p.r_b_min = std::min(a, b);
    return p;
}

BasePattern make_polygon_pattern(std::vector<Vec2> vertices) {
    BasePattern p;
    p.kind = BasePattern::Kind::ConvexPolygon;
    p.sampled.pts = std::move(vertices);
    for (std::size_t j = 0; j < p.sampled.pts.size(); ++j) {
        p.sampled.labels.push_back(EdgeLabel::footprint(-1, double(j), double(j + 1)));
    }
    check_pattern_geometry(p.sampled);
    p.r_b_min = min_boundary_distance_to_origin(p.sampled);
    return p;
}

BasePattern inscribed_disk_pattern(const BasePattern& base) {
    if (base.rotation_invariant) return base;
    return make_ellipse_pattern(base.r_b_min, base.r_b_min,
                                static_cast<int>(base.sampled.size()));
}

MultiPolygon footprint(const AgentState& agent, const BasePattern& base,
                       const AltitudeBounds& bounds) {
    check_altitude(agent.z, bounds);
    MultiPolygon mp = MultiPolygon::from_ring(base.sampled);
    mp = geom::affine_transform(mp, agent.z / bounds.z_min, agent.theta, agent.q);
    for (auto& part : mp.parts) {
        for (auto& l : part.outer.labels) l.agent = agent.id;
    }
    return mp;
}

double quality(double z, const AltitudeBounds& bounds) {
    check_altitude(z, bounds);
    const double d = z - bounds.z_min;
    const double r = bounds.range();
    const double v = d * d - r * r;
    return v * v / (r * r * r * r);
}

double quality_derivative(double z, const AltitudeBounds& bounds) {
    check_altitude(z, bounds);
    const double d = z - bounds.z_min;
    const double r = bounds.range();
    return 4.0 * d * (d * d - r * r) / (r * r * r * r);
}

Mat2 boundary_velocity_planar(Vec2, const AgentState&) { return Mat2::identity(); }

Vec2 boundary_velocity_altitude(Vec2 q, const AgentState& agent) {
    return (q - agent.q) / agent.z;
}

Vec2 boundary_velocity_yaw(Vec2 q, const AgentState& agent) { return (q - agent.q).perp(); }

} // namespace aircov::sensing
