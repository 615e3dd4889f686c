#include "aircov/geom/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aircov::geom {

namespace {

struct GaussRule {
    int n;
    const double* x;
    const double* w;
};

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kX1[] = {0.0};
constexpr double kW1[] = {2.0};
constexpr double kX2[] = {-0.5773502691896257, 0.5773502691896257};
constexpr double kW2[] = {1.0, 1.0};
constexpr double kX3[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kW3[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
constexpr double kX4[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                          0.8611363115940526};
constexpr double kW4[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                          0.3478548451374538};
constexpr double kX5[] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                          0.9061798459386640};
constexpr double kW5[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                          0.4786286704993665, 0.2369268850561891};

GaussRule gauss_rule(int order) {
    switch (order) {
        case 1: return {1, kX1, kW1};
        case 2: return {2, kX2, kW2};
        case 3: return {3, kX3, kW3};
        case 4: return {4, kX4, kW4};
        case 5: return {5, kX5, kW5};
        default: throw std::invalid_argument("line quadrature order must be in [1,5]");
    }
}

struct TriPoint {
    double l0, l1, l2; // barycentric coordinates
    double w;          // weight relative to triangle area
};

// Symmetric rules on the triangle, exact to the stated polynomial degree.
const std::array<TriPoint, 6> kTriDeg4 = {{
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
}};

const std::array<TriPoint, 12> kTriDeg6 = {{
    {0.501426509658179, 0.249286745170910, 0.249286745170911, 0.116786275726379},
    {0.249286745170910, 0.501426509658179, 0.249286745170911, 0.116786275726379},
    {0.249286745170910, 0.249286745170911, 0.501426509658179, 0.116786275726379},
    {0.873821971016996, 0.063089014491502, 0.063089014491502, 0.050844906370207},
    {0.063089014491502, 0.873821971016996, 0.063089014491502, 0.050844906370207},
    {0.063089014491502, 0.063089014491502, 0.873821971016996, 0.050844906370207},
    {0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374},
    {0.310352451033784, 0.053145049844817, 0.636502499121399, 0.082851075618374},
    {0.053145049844817, 0.636502499121399, 0.310352451033784, 0.082851075618374},
    {0.310352451033784, 0.636502499121399, 0.053145049844817, 0.082851075618374},
    {0.636502499121399, 0.053145049844817, 0.310352451033784, 0.082851075618374},
    {0.636502499121399, 0.310352451033784, 0.053145049844817, 0.082851075618374},
}};

struct Tri {
    Vec2 a, b, c;
    double area() const { return 0.5 * (b - a).cross(c - a); }
    double diameter() const {
        return std::max({dist(a, b), dist(b, c), dist(c, a)});
    }
};

bool point_in_tri(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    const double d0 = (b - a).cross(p - a);
    const double d1 = (c - b).cross(p - b);
    const double d2 = (a - c).cross(p - c);
    const double eps = -kGeomEps;
    return d0 >= eps && d1 >= eps && d2 >= eps;
}

// Ear clipping of one CCW ring.  Tolerates collinear vertices; if no clean
// ear exists (numerically degenerate ring) the flattest corner is removed,
// which only loses sliver area.
void ear_clip(const Ring& ring, std::vector<Tri>& out) {
    std::vector<Vec2> v = ring.pts;
    // Drop consecutive duplicates.
    v.erase(std::unique(v.begin(), v.end(),
                        [](Vec2 x, Vec2 y) { return dist(x, y) <= kGeomEps; }),
            v.end());
    while (v.size() > 1 && dist(v.front(), v.back()) <= kGeomEps) v.pop_back();

    while (v.size() > 3) {
        const std::size_t n = v.size();
        std::size_t clip_at = n;
        double flattest = std::numeric_limits<double>::infinity();
        std::size_t flattest_at = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 prev = v[(i + n - 1) % n], cur = v[i], next = v[(i + 1) % n];
            const double turn = (cur - prev).cross(next - cur);
            if (std::abs(turn) < flattest) {
                flattest = std::abs(turn);
                flattest_at = i;
            }
            if (turn <= 0.0) continue; // reflex or collinear corner
            bool blocked = false;
            for (std::size_t j = 0; j < n && !blocked; ++j) {
                if (j == (i + n - 1) % n || j == i || j == (i + 1) % n) continue;
                blocked = point_in_tri(v[j], prev, cur, next);
            }
            if (!blocked) {
                clip_at = i;
                break;
            }
        }
        if (clip_at == n) clip_at = flattest_at;
        const Vec2 prev = v[(clip_at + n - 1) % n], cur = v[clip_at], next = v[(clip_at + 1) % n];
        const Tri t{prev, cur, next};
        if (t.area() > kAreaEps) out.push_back(t);
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(clip_at));
    }
    if (v.size() == 3) {
        const Tri t{v[0], v[1], v[2]};
        if (std::abs(t.area()) > kAreaEps) out.push_back(t);
    }
}

void subdivide(const Tri& t, double max_diam, std::vector<Tri>& out) {
    if (max_diam <= 0.0 || t.diameter() <= max_diam) {
        out.push_back(t);
        return;
    }
    const Vec2 ab = (t.a + t.b) * 0.5, bc = (t.b + t.c) * 0.5, ca = (t.c + t.a) * 0.5;
    subdivide({t.a, ab, ca}, max_diam, out);
    subdivide({ab, t.b, bc}, max_diam, out);
    subdivide({ca, bc, t.c}, max_diam, out);
    subdivide({ab, bc, ca}, max_diam, out);
}

void ring_quadrature(const Ring& ring, const QuadratureOptions& opts, double sign,
                     std::vector<Vec2>& points, std::vector<double>& weights) {
    std::vector<Tri> tris;
    ear_clip(ring, tris);

    std::vector<Tri> fine;
    for (const Tri& t : tris) subdivide(t, opts.max_tri_diameter, fine);

    const TriPoint* rule = opts.tri_degree >= 6 ? kTriDeg6.data() : kTriDeg4.data();
    const std::size_t rn = opts.tri_degree >= 6 ? kTriDeg6.size() : kTriDeg4.size();
    for (const Tri& t : fine) {
        const double a = t.area();
        for (std::size_t k = 0; k < rn; ++k) {
            const TriPoint& tp = rule[k];
            points.push_back(t.a * tp.l0 + t.b * tp.l1 + t.c * tp.l2);
            weights.push_back(sign * a * tp.w);
        }
    }
}

} // namespace

Vec2 line_integral_vector(std::span<const LabeledEdge> edges,
                          const std::function<double(Vec2)>& w, int order) {
    const GaussRule g = gauss_rule(order);
    Vec2 acc{0.0, 0.0};
    for (const LabeledEdge& e : edges) {
        const double len = e.length();
        if (len <= kGeomEps) continue;
        const Vec2 n = e.outward_normal();
        const double half = 0.5 * len;
        for (int k = 0; k < g.n; ++k) {
            const Vec2 p = e.a + (e.b - e.a) * (0.5 * (g.x[k] + 1.0));
            acc += n * (w(p) * g.w[k] * half);
        }
    }
    return acc;
}

double line_integral_flux(std::span<const LabeledEdge> edges,
                          const std::function<Vec2(Vec2)>& F,
                          const std::function<double(Vec2)>& w, int order) {
    const GaussRule g = gauss_rule(order);
    double acc = 0.0;
    for (const LabeledEdge& e : edges) {
        const double len = e.length();
        if (len <= kGeomEps) continue;
        const Vec2 n = e.outward_normal();
        const double half = 0.5 * len;
        for (int k = 0; k < g.n; ++k) {
            const Vec2 p = e.a + (e.b - e.a) * (0.5 * (g.x[k] + 1.0));
            acc += F(p).dot(n) * w(p) * g.w[k] * half;
        }
    }
    return acc;
}

void collect_area_quadrature(const MultiPolygon& p, const QuadratureOptions& opts,
                             std::vector<Vec2>& points, std::vector<double>& weights) {
    points.clear();
    weights.clear();
    for (const PolygonWithHoles& part : p.parts) {
        ring_quadrature(part.outer, opts, 1.0, points, weights);
        for (Ring hole : part.holes) {
            hole.reverse(); // ear clipping expects CCW
            ring_quadrature(hole, opts, -1.0, points, weights);
        }
    }
}

double area_integral(const MultiPolygon& p, const std::function<double(Vec2)>& w,
                     const QuadratureOptions& opts) {
    std::vector<Vec2> pts;
    std::vector<double> wts;
    collect_area_quadrature(p, opts, pts, wts);
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) acc += w(pts[i]) * wts[i];
    return acc;
}

} // namespace aircov::geom
