#include "aircov/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aircov/geom/clip.hpp"

namespace aircov::partition {

using geom::MultiPolygon;
using sensing::AgentState;

namespace {

std::map<int, MultiPolygon> build_footprints(const std::vector<AgentState>& agents,
                                             const sensing::BasePattern& base,
                                             const sensing::AltitudeBounds& bounds) {
    std::map<int, MultiPolygon> fps;
    for (const auto& a : agents) fps.emplace(a.id, footprint(a, base, bounds));
    return fps;
}

std::map<int, std::set<int>> neighbor_sets(const std::vector<AgentState>& agents,
                                           const std::map<int, MultiPolygon>& fps) {
    std::map<int, std::set<int>> nb;
    for (const auto& a : agents) nb[a.id];
    for (std::size_t i = 0; i < agents.size(); ++i) {
        for (std::size_t j = i + 1; j < agents.size(); ++j) {
            const int ai = agents[i].id, aj = agents[j].id;
            if (geom::area(geom::intersect(fps.at(ai), fps.at(aj))) > geom::kAreaEps) {
                nb[ai].insert(aj);
                nb[aj].insert(ai);
            }
        }
    }
    return nb;
}

// Connected components of the "tied and overlapping" relation.
std::vector<std::set<int>> tie_groups(const std::vector<AgentState>& agents,
                                      const std::map<int, std::set<int>>& neighbors) {
    std::map<int, double> z;
    for (const auto& a : agents) z[a.id] = a.z;
    std::map<int, int> parent;
    for (const auto& a : agents) parent[a.id] = a.id;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [i, js] : neighbors)
        for (int j : js)
            if (std::abs(z[i] - z[j]) <= kTieEps) parent[find(i)] = find(j);
    std::map<int, std::set<int>> comps;
    for (const auto& a : agents) comps[find(a.id)].insert(a.id);
    std::vector<std::set<int>> groups;
    for (auto& [root, members] : comps)
        if (members.size() >= 2) groups.push_back(std::move(members));
    return groups;
}

} // namespace

std::map<int, std::set<int>> compute_neighbors(const std::vector<AgentState>& agents,
                                               const sensing::BasePattern& base,
                                               const sensing::AltitudeBounds& bounds) {
    return neighbor_sets(agents, build_footprints(agents, base, bounds));
}

PartitionResult compute_partition(const std::vector<AgentState>& agents,
                                  const sensing::BasePattern& base,
                                  const geom::MultiPolygon& region,
                                  const sensing::AltitudeBounds& bounds) {
    const auto fps = build_footprints(agents, base, bounds);

    PartitionResult out;
    out.neighbors = neighbor_sets(agents, fps);
    const auto groups = tie_groups(agents, out.neighbors);

    std::map<int, const std::set<int>*> group_of;
    for (const auto& g : groups)
        for (int id : g) group_of[id] = &g;

    for (const auto& a : agents) {
        // Region as the left operand so a footprint edge coinciding with the
        // region boundary keeps the region label.
        MultiPolygon cell = geom::intersect(region, fps.at(a.id));
        for (const auto& b : agents) {
            if (b.id == a.id) continue;
            const bool dominates = b.z < a.z - kTieEps;
            const bool same_group = group_of.count(a.id) && group_of[a.id]->count(b.id);
            if (dominates || same_group) cell = geom::difference(cell, fps.at(b.id));
        }
        out.cells.emplace(a.id, std::move(cell));
    }

    for (const auto& g : groups) {
        std::map<int, double> z;
        for (const auto& a : agents) z[a.id] = a.z;
        MultiPolygon overlaps;
        for (auto it = g.begin(); it != g.end(); ++it)
            for (auto jt = std::next(it); jt != g.end(); ++jt)
                overlaps = geom::unite(overlaps, geom::intersect(fps.at(*it), fps.at(*jt)));
        MultiPolygon wc = geom::intersect(region, overlaps);
        const double z_level = z.at(*g.begin());
        for (const auto& b : agents)
            if (!g.count(b.id) && b.z < z_level - kTieEps) wc = geom::difference(wc, fps.at(b.id));
        if (geom::area(wc) > geom::kAreaEps)
            out.tied_regions.push_back({std::move(wc), sensing::quality(z_level, bounds), g});
    }

    out.neutral = region;
    for (const auto& a : agents) out.neutral = geom::difference(out.neutral, fps.at(a.id));
    return out;
}

namespace {

// Cut an edge at every transversal crossing with the given boundaries.
std::vector<geom::LabeledEdge> split_at_crossings(const geom::LabeledEdge& e,
                                                  const std::vector<geom::LabeledEdge>& cutters) {
    const geom::Vec2 d = e.b - e.a;
    const double len = d.norm();
    if (len <= geom::kGeomEps) return {e};
    const double t_eps = geom::kGeomEps / len;

    std::vector<double> ts;
    for (const auto& g : cutters) {
        const geom::Vec2 s = g.b - g.a;
        const double slen = s.norm();
        const double den = d.cross(s);
        if (std::abs(den) <= 1e-12 * len * slen) continue;
        const geom::Vec2 w = g.a - e.a;
        const double t = w.cross(s) / den;
        const double u = w.cross(d) / den;
        const double u_eps = geom::kGeomEps / slen;
        if (t > t_eps && t < 1.0 - t_eps && u > -u_eps && u < 1.0 + u_eps) ts.push_back(t);
    }
    if (ts.empty()) return {e};
    std::sort(ts.begin(), ts.end());

    std::vector<geom::LabeledEdge> out;
    double t0 = 0.0;
    auto emit = [&](double t1) {
        if (t1 - t0 > t_eps)
            out.push_back({e.a + d * t0, e.a + d * t1, e.label.sub(t0, t1)});
        t0 = t1;
    };
    for (double t : ts) emit(t);
    emit(1.0);
    return out;
}

} // namespace

ClassifiedBoundary classify_boundaries(const PartitionResult& part,
                                       const std::vector<AgentState>& agents,
                                       const sensing::BasePattern& base,
                                       const sensing::AltitudeBounds& bounds) {
    const auto fps = build_footprints(agents, base, bounds);

    ClassifiedBoundary out;
    for (const auto& a : agents) {
        AgentBoundary& ab = out.per_agent[a.id];
        std::vector<geom::LabeledEdge> cutters;
        for (const auto& b : agents)
            if (b.id != a.id)
                for (const auto& g : geom::all_edges(fps.at(b.id))) cutters.push_back(g);

        std::vector<geom::LabeledEdge> pieces;
        for (const auto& e : geom::all_edges(part.cells.at(a.id))) {
            if (e.label.is_footprint_of(a.id)) {
                for (auto& p : split_at_crossings(e, cutters)) pieces.push_back(std::move(p));
            } else {
                pieces.push_back(e);
            }
        }

        for (const auto& e : pieces) {
            if (e.label.is_region()) {
                ab.on_region.push_back(e);
                continue;
            }
            if (!e.label.is_footprint_of(a.id)) {
                ab.foreign_arc.push_back(e);
                continue;
            }
            const geom::Vec2 mid = e.midpoint();
            const geom::Vec2 probe = mid + e.outward_normal() * kProbeOffset;
            int in_cell = -1;
            for (const auto& [id, cell] : part.cells) {
                if (geom::contains_point(cell, probe, 0.0)) {
                    in_cell = id;
                    break;
                }
            }
            if (in_cell == a.id)
                throw std::logic_error("boundary edge of cell " + std::to_string(a.id) +
                                       " faces its own cell");
            if (in_cell >= 0) {
                const auto& other = part.cells.at(in_cell);
                if (geom::boundary_distance(other, mid) <= kAdjacencyTol) {
                    ab.shared_own_arc[in_cell].push_back(e);
                    continue;
                }
                if (geom::contains_point(other, mid, 0.0))
                    throw std::logic_error("own-footprint edge of cell " + std::to_string(a.id) +
                                           " lies inside cell " + std::to_string(in_cell));
                // Fall through: the probe jumped a gap narrower than its offset.
            }
            int adj = -1;
            double adj_dist = kAdjacencyTol;
            for (const auto& [id, cell] : part.cells) {
                if (id == a.id) continue;
                const double d = geom::boundary_distance(cell, mid);
                if (d <= adj_dist) {
                    adj_dist = d;
                    adj = id;
                }
            }
            if (adj >= 0) {
                ab.shared_own_arc[adj].push_back(e);
                continue;
            }
            bool tied_adjacent = false;
            for (const auto& t : part.tied_regions)
                if (geom::contains_point(t.region, mid, kAdjacencyTol)) {
                    tied_adjacent = true;
                    break;
                }
            if (tied_adjacent)
                ab.foreign_arc.push_back(e);
            else
                ab.free_arc.push_back(e);
        }
    }
    return out;
}

} // namespace aircov::partition
