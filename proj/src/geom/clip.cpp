#include "aircov/geom/clip.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

// Boolean operations by fragment classification: every edge of both operands
// is split at all mutual intersections, each resulting fragment is classified
// by which side of it lies inside the result, and the kept fragments are
// re-stitched into rings.  Coincident fragments of the two operands are
// resolved pairwise, which makes fully degenerate inputs (identical polygons,
// shared edges, containment without crossings) behave like their exact set
// counterparts.  The left operand's label wins on coincident edges.

namespace aircov::geom {

namespace {

enum class BoolOp { Intersect, Union, Difference };

constexpr double kParallelEps = 1e-12;

struct InputEdge {
    Vec2 a, b;
    EdgeLabel label;
    BBox box;
    double len = 0.0;
};

struct SplitPoint {
    double t;
    Vec2 p;
};

struct Fragment {
    Vec2 a, b;
    EdgeLabel label;
    int side = 0;           // 0 = left operand, 1 = right operand
    bool consumed = false;  // handled via a coincident partner on the other side
    Vec2 midpoint() const { return (a + b) * 0.5; }
};

void collect_edges(const MultiPolygon& mp, std::vector<InputEdge>& out) {
    for (const LabeledEdge& e : all_edges(mp)) {
        InputEdge ie;
        ie.a = e.a;
        ie.b = e.b;
        ie.label = e.label;
        ie.len = dist(e.a, e.b);
        if (ie.len <= kGeomEps) continue;
        ie.box.xmin = std::min(e.a.x, e.b.x);
        ie.box.xmax = std::max(e.a.x, e.b.x);
        ie.box.ymin = std::min(e.a.y, e.b.y);
        ie.box.ymax = std::max(e.a.y, e.b.y);
        out.push_back(ie);
    }
}

// Registers the split points the pair (ea, eb) induces on each other.  Split
// coordinates are shared exactly between the two edges so that stitching can
// weld them without search slack.
void intersect_pair(const InputEdge& ea, const InputEdge& eb,
                    std::vector<SplitPoint>& sa, std::vector<SplitPoint>& sb) {
    const Vec2 p = ea.a, r = ea.b - ea.a;
    const Vec2 q = eb.a, s = eb.b - eb.a;
    const double denom = r.cross(s);
    const double cross_qp_r = (q - p).cross(r);

    if (std::abs(denom) <= kParallelEps * ea.len * eb.len) {
        // Parallel support lines; collinear when they are within tolerance.
        if (std::abs(cross_qp_r) > kGeomEps * ea.len) return;
        auto reg = [](Vec2 base, Vec2 dir, double len, Vec2 pt, std::vector<SplitPoint>& out) {
            const double t = (pt - base).dot(dir) / (len * len);
            const double et = kGeomEps / len;
            if (t > et && t < 1.0 - et) out.push_back({t, pt});
        };
        reg(p, r, ea.len, eb.a, sa);
        reg(p, r, ea.len, eb.b, sa);
        reg(q, s, eb.len, ea.a, sb);
        reg(q, s, eb.len, ea.b, sb);
        return;
    }

    const double t = (q - p).cross(s) / denom;
    const double u = cross_qp_r / denom;
    const double et = kGeomEps / ea.len, eu = kGeomEps / eb.len;
    if (t < -et || t > 1.0 + et || u < -eu || u > 1.0 + eu) return;

    Vec2 pt = p + r * t;
    // Snap to the nearest endpoint so vertex-on-edge contacts do not spawn
    // near-duplicate vertices.
    const Vec2 cands[4] = {ea.a, ea.b, eb.a, eb.b};
    double best = kGeomEps;
    int best_i = -1;
    for (int k = 0; k < 4; ++k) {
        const double d = dist(pt, cands[k]);
        if (d <= best) {
            best = d;
            best_i = k;
        }
    }
    if (best_i >= 0) pt = cands[best_i];

    const double ta = (pt - p).dot(r) / (ea.len * ea.len);
    const double ub = (pt - q).dot(s) / (eb.len * eb.len);
    if (ta > et && ta < 1.0 - et) sa.push_back({ta, pt});
    if (ub > eu && ub < 1.0 - eu) sb.push_back({ub, pt});
}

void build_fragments(const std::vector<InputEdge>& edges, std::vector<std::vector<SplitPoint>>& splits,
                     int side, std::vector<Fragment>& out) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const InputEdge& e = edges[i];
        auto& sp = splits[i];
        sp.push_back({0.0, e.a});
        sp.push_back({1.0, e.b});
        std::sort(sp.begin(), sp.end(), [](const SplitPoint& x, const SplitPoint& y) { return x.t < y.t; });
        for (std::size_t k = 0; k + 1 < sp.size(); ++k) {
            const SplitPoint& s0 = sp[k];
            // Skip duplicates produced by several edges cutting at one spot.
            const SplitPoint& s1 = sp[k + 1];
            if (dist(s0.p, s1.p) <= kGeomEps) continue;
            Fragment f;
            f.a = s0.p;
            f.b = s1.p;
            f.label = e.label.sub(s0.t, s1.t);
            f.side = side;
            out.push_back(f);
        }
    }
}

bool inside_even_odd(const MultiPolygon& mp, Vec2 q) { return contains_point(mp, q, 0.0); }

bool pred(BoolOp op, bool in_a, bool in_b) {
    switch (op) {
        case BoolOp::Intersect: return in_a && in_b;
        case BoolOp::Union: return in_a || in_b;
        case BoolOp::Difference: return in_a && !in_b;
    }
    return false;
}

struct CellKey {
    std::int64_t x, y;
    bool operator==(const CellKey& o) const { return x == o.x && y == o.y; }
};
struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        return static_cast<std::size_t>(static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull ^
                                        static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4Full);
    }
};

constexpr double kWeldCell = 2.0 * kGeomEps;

CellKey cell_of(Vec2 p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x / kWeldCell)),
                   static_cast<std::int64_t>(std::floor(p.y / kWeldCell))};
}

/// Welds nearby points to shared node ids for exact chain stitching.
class NodeIndex {
public:
    int find_or_add(Vec2 p) {
        const int found = find(p);
        if (found >= 0) return found;
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(p);
        grid_[cell_of(p)].push_back(id);
        return id;
    }

    int find(Vec2 p) const {
        const CellKey c = cell_of(p);
        int best = -1;
        double best_d = kGeomEps;
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = grid_.find(CellKey{c.x + dx, c.y + dy});
                if (it == grid_.end()) continue;
                for (const int id : it->second) {
                    const double d = dist(nodes_[id], p);
                    if (d <= best_d) {
                        best_d = d;
                        best = id;
                    }
                }
            }
        }
        return best;
    }

    Vec2 pos(int id) const { return nodes_[id]; }
    std::size_t size() const { return nodes_.size(); }

private:
    std::vector<Vec2> nodes_;
    std::unordered_map<CellKey, std::vector<int>, CellKeyHash> grid_;
};

struct KeptEdge {
    int from = -1, to = -1;
    EdgeLabel label;
    bool used = false;
};

ClipStats g_stats;

MultiPolygon assemble(const std::vector<KeptEdge>& kept_in, const NodeIndex& nodes) {
    std::vector<KeptEdge> kept = kept_in;
    std::vector<std::vector<int>> out_edges(nodes.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        out_edges[kept[i].from].push_back(static_cast<int>(i));
    }

    std::vector<Ring> rings;
    for (std::size_t start = 0; start < kept.size(); ++start) {
        if (kept[start].used) continue;
        Ring ring;
        const int start_node = kept[start].from;
        int cur = static_cast<int>(start);
        bool closed = false;
        while (true) {
            kept[cur].used = true;
            ring.pts.push_back(nodes.pos(kept[cur].from));
            ring.labels.push_back(kept[cur].label);
            const int at = kept[cur].to;
            if (at == start_node) {
                closed = true;
                break;
            }
            // Leftmost-turn rule keeps rings simple where several kept edges
            // meet at one node (tangent regions, shared corners).
            const Vec2 din = nodes.pos(kept[cur].to) - nodes.pos(kept[cur].from);
            int next = -1;
            double best_angle = -10.0;
            for (const int cand : out_edges[at]) {
                if (kept[cand].used) continue;
                const Vec2 dout = nodes.pos(kept[cand].to) - nodes.pos(kept[cand].from);
                double ang = std::atan2(din.cross(dout), din.dot(dout));
                if (kept[cand].to == kept[cur].from && std::abs(ang - std::numbers::pi) < 1e-12) {
                    ang = -std::numbers::pi; // exact U-turn only as a last resort
                }
                if (ang > best_angle) {
                    best_angle = ang;
                    next = cand;
                }
            }
            if (next < 0) break; // dangling chain
            cur = next;
        }
        if (!closed || ring.size() < 3) {
            ++g_stats.dropped_chains;
            continue;
        }
        if (std::abs(ring.signed_area()) < kAreaEps) continue;
        rings.push_back(std::move(ring));
    }

    // Nest holes (CW rings) inside the smallest containing outer (CCW ring).
    MultiPolygon result;
    std::vector<std::size_t> outer_index;
    for (auto& r : rings) {
        if (r.is_ccw()) {
            outer_index.push_back(result.parts.size());
            result.parts.push_back(PolygonWithHoles{std::move(r), {}});
        } else {
            outer_index.push_back(static_cast<std::size_t>(-1));
        }
    }
    for (std::size_t i = 0; i < rings.size(); ++i) {
        Ring& r = rings[i];
        if (r.empty() || r.is_ccw()) continue;
        int best_part = -1;
        double best_area = 0.0;
        for (std::size_t j = 0; j < rings.size(); ++j) {
            if (outer_index[j] == static_cast<std::size_t>(-1)) continue;
            const Ring& outer = result.parts[outer_index[j]].outer;
            if (!point_in_ring(outer.pts, r.pts[0])) continue;
            const double a = outer.signed_area();
            if (best_part < 0 || a < best_area) {
                best_part = static_cast<int>(outer_index[j]);
                best_area = a;
            }
        }
        if (best_part >= 0) {
            result.parts[best_part].holes.push_back(std::move(r));
        } else {
            ++g_stats.dropped_holes;
        }
    }

    // Discard sliver parts.
    std::erase_if(result.parts, [](const PolygonWithHoles& part) {
        double a = part.outer.signed_area();
        for (const auto& h : part.holes) a += h.signed_area();
        return a < kAreaEps;
    });
    return result;
}

MultiPolygon boolean_op(const MultiPolygon& a, const MultiPolygon& b, BoolOp op) {
    std::vector<InputEdge> ea, eb;
    collect_edges(a, ea);
    collect_edges(b, eb);

    std::vector<std::vector<SplitPoint>> sa(ea.size()), sb(eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        for (std::size_t j = 0; j < eb.size(); ++j) {
            if (!ea[i].box.overlaps(eb[j].box, kGeomEps)) continue;
            intersect_pair(ea[i], eb[j], sa[i], sb[j]);
        }
    }

    std::vector<Fragment> frags;
    build_fragments(ea, sa, 0, frags);
    const std::size_t b_begin = frags.size();
    build_fragments(eb, sb, 1, frags);

    // Index the right operand's fragments by endpoints for coincidence lookup.
    std::unordered_map<CellKey, std::vector<int>, CellKeyHash> b_mid_index;
    for (std::size_t i = b_begin; i < frags.size(); ++i) {
        b_mid_index[cell_of(frags[i].midpoint())].push_back(static_cast<int>(i));
    }

    auto find_partner = [&](const Fragment& f, bool& same_dir) -> int {
        const CellKey c = cell_of(f.midpoint());
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = b_mid_index.find(CellKey{c.x + dx, c.y + dy});
                if (it == b_mid_index.end()) continue;
                for (const int id : it->second) {
                    const Fragment& g = frags[id];
                    if (g.consumed) continue;
                    if (dist(f.a, g.a) <= kGeomEps && dist(f.b, g.b) <= kGeomEps) {
                        same_dir = true;
                        return id;
                    }
                    if (dist(f.a, g.b) <= kGeomEps && dist(f.b, g.a) <= kGeomEps) {
                        same_dir = false;
                        return id;
                    }
                }
            }
        }
        return -1;
    };

    NodeIndex nodes;
    std::vector<KeptEdge> kept;

    auto keep_fragment = [&](const Fragment& f, bool reversed) {
        KeptEdge e;
        EdgeLabel label = f.label;
        Vec2 pa = f.a, pb = f.b;
        if (reversed) {
            std::swap(pa, pb);
            std::swap(label.k0, label.k1);
        }
        e.from = nodes.find_or_add(pa);
        e.to = nodes.find_or_add(pb);
        e.label = label;
        if (e.from != e.to) kept.push_back(e);
    };

    for (std::size_t i = 0; i < frags.size(); ++i) {
        Fragment& f = frags[i];
        if (f.consumed) continue;
        const MultiPolygon& other = f.side == 0 ? b : a;

        // Membership of the two sides of this fragment in the other operand.
        bool oth_left, oth_right;
        bool same_dir = false;
        const int partner = f.side == 0 ? find_partner(f, same_dir) : -1;
        if (partner >= 0) {
            frags[partner].consumed = true;
            oth_left = same_dir;
            oth_right = !same_dir;
        } else {
            const Vec2 m = f.midpoint();
            if (boundary_distance(other, m) <= kGeomEps) {
                // On the other boundary but without a coincident partner
                // (numerical tangency): probe both sides directly.
                const Vec2 n = LabeledEdge{f.a, f.b, f.label}.outward_normal();
                const double h = 64.0 * kGeomEps;
                oth_left = inside_even_odd(other, m - n * h);
                oth_right = inside_even_odd(other, m + n * h);
            } else {
                oth_left = oth_right = inside_even_odd(other, m);
            }
        }

        // Own interior lies left of the fragment (outer rings CCW, holes CW).
        bool res_left, res_right;
        if (f.side == 0) {
            res_left = pred(op, true, oth_left);
            res_right = pred(op, false, oth_right);
        } else {
            res_left = pred(op, oth_left, true);
            res_right = pred(op, oth_right, false);
        }
        if (res_left == res_right) continue;
        keep_fragment(f, /*reversed=*/!res_left);
    }

    return assemble(kept, nodes);
}

} // namespace

ClipStats& clip_stats() { return g_stats; }

MultiPolygon intersect(const MultiPolygon& a, const MultiPolygon& b) {
    if (a.empty() || b.empty()) return {};
    if (!bbox(a).overlaps(bbox(b), kGeomEps)) return {};
    return boolean_op(a, b, BoolOp::Intersect);
}

MultiPolygon difference(const MultiPolygon& a, const MultiPolygon& b) {
    if (a.empty()) return {};
    if (b.empty() || !bbox(a).overlaps(bbox(b), kGeomEps)) return a;
    return boolean_op(a, b, BoolOp::Difference);
}

MultiPolygon unite(const MultiPolygon& a, const MultiPolygon& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (!bbox(a).overlaps(bbox(b), kGeomEps)) {
        MultiPolygon out = a;
        out.parts.insert(out.parts.end(), b.parts.begin(), b.parts.end());
        return out;
    }
    return boolean_op(a, b, BoolOp::Union);
}

MultiPolygon union_all(std::span<const MultiPolygon> regions) {
    MultiPolygon acc;
    for (const auto& r : regions) acc = unite(acc, r);
    return acc;
}

} // namespace aircov::geom
