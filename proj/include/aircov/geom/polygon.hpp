#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aircov/geom/vec2.hpp"

namespace aircov::geom {

/// Coincidence tolerance for vertices and boundary tests (world units).
inline constexpr double kGeomEps = 1e-9;
/// Regions with less area than this are considered empty slivers.
inline constexpr double kAreaEps = 1e-12;

/// Provenance of a polygon edge: either the fixed region boundary or the
/// sensing-footprint boundary of a specific agent.  Footprint edges keep the
/// parameter span [k0,k1] of the base-pattern parametrization they came from,
/// so an edge can be traced back through any number of boolean operations.
struct EdgeLabel {
    enum class Origin : std::uint8_t { Region, Footprint };

    Origin origin = Origin::Region;
    int agent = -1;         // valid iff origin == Footprint
    double k0 = 0.0;        // base-pattern parameter at edge start
    double k1 = 0.0;        // base-pattern parameter at edge end

    static EdgeLabel region() { return EdgeLabel{}; }
    static EdgeLabel footprint(int agent_id, double k0_, double k1_) {
        return EdgeLabel{Origin::Footprint, agent_id, k0_, k1_};
    }

    bool is_region() const { return origin == Origin::Region; }
    bool is_footprint() const { return origin == Origin::Footprint; }
    bool is_footprint_of(int agent_id) const {
        return origin == Origin::Footprint && agent == agent_id;
    }
    double param_anchor() const { return 0.5 * (k0 + k1); }

    /// Label for the [t0,t1] sub-segment of this edge.
    EdgeLabel sub(double t0, double t1) const {
        EdgeLabel l = *this;
        l.k0 = k0 + (k1 - k0) * t0;
        l.k1 = k0 + (k1 - k0) * t1;
        return l;
    }
};

/// Closed vertex loop with one provenance label per edge.
/// Edge j runs pts[j] -> pts[(j+1) % size()]; its label is labels[j].
struct Ring {
    std::vector<Vec2> pts;
    std::vector<EdgeLabel> labels;

    std::size_t size() const { return pts.size(); }
    bool empty() const { return pts.empty(); }

    double signed_area() const;
    double perimeter() const;
    bool is_ccw() const { return signed_area() > 0.0; }

    /// Reverses orientation; labels stay attached to their segments.
    void reverse();

    /// Ring from bare points, all edges labeled identically.
    static Ring from_points(std::vector<Vec2> pts, EdgeLabel label = EdgeLabel::region());
};

struct PolygonWithHoles {
    Ring outer;                 // counter-clockwise
    std::vector<Ring> holes;    // clockwise
};

/// Possibly disconnected region with holes.  The working representation of
/// footprints, cells, tied regions and the neutral region.
struct MultiPolygon {
    std::vector<PolygonWithHoles> parts;

    bool empty() const { return parts.empty(); }

    static MultiPolygon from_ring(Ring outer);
};

struct LabeledEdge {
    Vec2 a, b;
    EdgeLabel label;

    Vec2 midpoint() const { return (a + b) * 0.5; }
    double length() const { return dist(a, b); }
    /// Unit normal pointing right of a->b.  With outer rings CCW and holes CW
    /// this is the outward normal of the enclosed region on both ring kinds.
    Vec2 outward_normal() const {
        const Vec2 d = b - a;
        const double len = d.norm();
        return len > 0.0 ? Vec2{d.y / len, -d.x / len} : Vec2{0.0, 0.0};
    }
};

double area(const MultiPolygon& p);
double perimeter(const MultiPolygon& p);
std::vector<LabeledEdge> all_edges(const MultiPolygon& p);

/// Point membership with holes; points within boundary_tol of any edge count
/// as inside.
bool contains_point(const MultiPolygon& p, Vec2 q, double boundary_tol = kGeomEps);

/// Distance from q to the nearest edge of p (infinity for an empty region).
double boundary_distance(const MultiPolygon& p, Vec2 q);

/// Scaling, rotation about the origin, then translation, applied to every
/// vertex.  Labels and orientation are preserved.  Throws std::invalid_argument
/// if scale <= 0.
MultiPolygon affine_transform(const MultiPolygon& p, double scale, double rotation,
                              Vec2 translation);

/// Even-odd membership test against a single ring (ignores labels).
bool point_in_ring(std::span<const Vec2> ring, Vec2 q);

struct BBox {
    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
    bool overlaps(const BBox& o, double pad = 0.0) const {
        return xmin <= o.xmax + pad && o.xmin <= xmax + pad &&
               ymin <= o.ymax + pad && o.ymin <= ymax + pad;
    }
};
BBox bbox(const MultiPolygon& p);
BBox bbox(std::span<const Vec2> pts);

/// Structural validity per the ring/polygon invariants: >=3 vertices, no
/// consecutive duplicates, simple rings, outer CCW / holes CW, holes inside
/// their outer.  Returns a human-readable issue list (empty when valid).
std::vector<std::string> validate(const MultiPolygon& p);

} // namespace aircov::geom
