#include "aircov/geom/polygon.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace aircov::geom {

double Ring::signed_area() const {
    const std::size_t n = pts.size();
    if (n < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        s += pts[j].cross(pts[i]);
    }
    return 0.5 * s;
}

double Ring::perimeter() const {
    const std::size_t n = pts.size();
    double s = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        s += dist(pts[j], pts[i]);
    }
    return s;
}

void Ring::reverse() {
    const std::size_t n = pts.size();
    std::reverse(pts.begin(), pts.end());
    // Edge i of the reversed ring is the reversal of original edge (n-2-i) mod n.
    std::vector<EdgeLabel> rl(n);
    for (std::size_t i = 0; i < n; ++i) {
        EdgeLabel l = labels[(2 * n - 2 - i) % n];
        std::swap(l.k0, l.k1);
        rl[i] = l;
    }
    labels = std::move(rl);
}

Ring Ring::from_points(std::vector<Vec2> pts_, EdgeLabel label) {
    Ring r;
    r.labels.assign(pts_.size(), label);
    r.pts = std::move(pts_);
    return r;
}

MultiPolygon MultiPolygon::from_ring(Ring outer) {
    MultiPolygon p;
    if (!outer.empty()) {
        if (!outer.is_ccw()) outer.reverse();
        p.parts.push_back(PolygonWithHoles{std::move(outer), {}});
    }
    return p;
}

double area(const MultiPolygon& p) {
    double s = 0.0;
    for (const auto& part : p.parts) {
        s += part.outer.signed_area();
        for (const auto& h : part.holes) s += h.signed_area(); // holes are CW: negative
    }
    return s;
}

double perimeter(const MultiPolygon& p) {
    double s = 0.0;
    for (const auto& part : p.parts) {
        s += part.outer.perimeter();
        for (const auto& h : part.holes) s += h.perimeter();
    }
    return s;
}

std::vector<LabeledEdge> all_edges(const MultiPolygon& p) {
    std::vector<LabeledEdge> edges;
    auto emit = [&](const Ring& r) {
        const std::size_t n = r.size();
        for (std::size_t i = 0; i < n; ++i) {
            edges.push_back(LabeledEdge{r.pts[i], r.pts[(i + 1) % n], r.labels[i]});
        }
    };
    for (const auto& part : p.parts) {
        emit(part.outer);
        for (const auto& h : part.holes) emit(h);
    }
    return edges;
}

bool point_in_ring(std::span<const Vec2> ring, Vec2 q) {
    // Even-odd crossing count with the half-open rule.
    bool in = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = ring[j], b = ring[i];
        if ((a.y > q.y) != (b.y > q.y)) {
            const double xint = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (q.x < xint) in = !in;
        }
    }
    return in;
}

double boundary_distance(const MultiPolygon& p, Vec2 q) {
    double best = std::numeric_limits<double>::infinity();
    auto scan = [&](const Ring& r) {
        const std::size_t n = r.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            best = std::min(best, dist2_point_segment(q, r.pts[j], r.pts[i]));
        }
    };
    for (const auto& part : p.parts) {
        scan(part.outer);
        for (const auto& h : part.holes) scan(h);
    }
    return std::sqrt(best);
}

bool contains_point(const MultiPolygon& p, Vec2 q, double boundary_tol) {
    for (const auto& part : p.parts) {
        if (!point_in_ring(part.outer.pts, q)) continue;
        bool in_hole = false;
        for (const auto& h : part.holes) {
            if (point_in_ring(h.pts, q)) { in_hole = true; break; }
        }
        if (!in_hole) return true;
    }
    return boundary_tol > 0.0 && boundary_distance(p, q) <= boundary_tol;
}

MultiPolygon affine_transform(const MultiPolygon& p, double scale, double rotation,
                              Vec2 translation) {
    if (!(scale > 0.0)) {
        throw std::invalid_argument("affine_transform: scale must be positive");
    }
    const double c = std::cos(rotation), s = std::sin(rotation);
    auto map = [&](Vec2 v) {
        const Vec2 w = v * scale;
        return Vec2{translation.x + c * w.x - s * w.y, translation.y + s * w.x + c * w.y};
    };
    MultiPolygon out = p;
    for (auto& part : out.parts) {
        for (auto& v : part.outer.pts) v = map(v);
        for (auto& h : part.holes)
            for (auto& v : h.pts) v = map(v);
    }
    return out;
}

BBox bbox(std::span<const Vec2> pts) {
    BBox b;
    if (pts.empty()) return b;
    b.xmin = b.xmax = pts[0].x;
    b.ymin = b.ymax = pts[0].y;
    for (const Vec2 v : pts) {
        b.xmin = std::min(b.xmin, v.x);
        b.xmax = std::max(b.xmax, v.x);
        b.ymin = std::min(b.ymin, v.y);
        b.ymax = std::max(b.ymax, v.y);
    }
    return b;
}

BBox bbox(const MultiPolygon& p) {
    BBox b;
    bool first = true;
    for (const auto& part : p.parts) {
        const BBox ob = bbox(std::span<const Vec2>(part.outer.pts));
        if (first) {
            b = ob;
            first = false;
        } else {
            b.xmin = std::min(b.xmin, ob.xmin);
            b.xmax = std::max(b.xmax, ob.xmax);
            b.ymin = std::min(b.ymin, ob.ymin);
            b.ymax = std::max(b.ymax, ob.ymax);
        }
    }
    return b;
}

namespace {

// Transversal crossing strictly interior to both segments.  Endpoint touches
// and collinear overlaps within kGeomEps do not count: boolean outputs
// legitimately chain collinear fragments through welded vertices.
bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const Vec2 r = b - a, s = d - c;
    const double rl = r.norm(), sl = s.norm();
    const double den = r.cross(s);
    if (std::abs(den) <= 1e-12 * rl * sl) return false;
    const double t = (c - a).cross(s) / den;
    const double u = (c - a).cross(r) / den;
    const double et = kGeomEps / rl, eu = kGeomEps / sl;
    return t > et && t < 1.0 - et && u > eu && u < 1.0 - eu;
}

bool ring_is_simple(const Ring& r) {
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = r.pts[i], b = r.pts[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            const Vec2 c = r.pts[j], d = r.pts[(j + 1) % n];
            if (segments_properly_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

} // namespace

std::vector<std::string> validate(const MultiPolygon& p) {
    std::vector<std::string> issues;
    auto check_ring = [&](const Ring& r, const std::string& what, bool want_ccw) {
        if (r.size() < 3) {
            issues.push_back(what + ": fewer than 3 vertices");
            return;
        }
        if (r.labels.size() != r.pts.size()) {
            issues.push_back(what + ": label count != vertex count");
        }
        for (std::size_t i = 0; i < r.size(); ++i) {
            const Vec2 a = r.pts[i], b = r.pts[(i + 1) % r.size()];
            if (!a.finite()) issues.push_back(what + ": non-finite vertex");
            if (dist(a, b) <= kGeomEps) {
                issues.push_back(what + ": consecutive coincident vertices");
                break;
            }
        }
        if (want_ccw != r.is_ccw()) {
            issues.push_back(what + (want_ccw ? ": outer ring not CCW" : ": hole ring not CW"));
        }
        if (!ring_is_simple(r)) issues.push_back(what + ": self-intersecting ring");
    };
    for (std::size_t pi = 0; pi < p.parts.size(); ++pi) {
        const auto& part = p.parts[pi];
        const std::string tag = "part " + std::to_string(pi);
        check_ring(part.outer, tag + " outer", true);
        for (std::size_t hi = 0; hi < part.holes.size(); ++hi) {
            const Ring& h = part.holes[hi];
            check_ring(h, tag + " hole " + std::to_string(hi), false);
            if (!h.empty() && !point_in_ring(part.outer.pts, h.pts[0])) {
                issues.push_back(tag + ": hole vertex outside outer ring");
            }
        }
    }
    if (area(p) < -kAreaEps) issues.push_back("negative total area");
    return issues;
}

} // namespace aircov::geom
