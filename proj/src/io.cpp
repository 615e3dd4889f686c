#include "aircov/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include <json.hpp>

#include "aircov/geom/clip.hpp"
#include "aircov/kernels/kernels.hpp"
#include "aircov/partition.hpp"

namespace aircov::io {

using json = nlohmann::json;
using geom::MultiPolygon;
using geom::Vec2;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& path, const std::string& why) {
    throw ScenarioError(origin + ": " + (path.empty() ? why : path + ": " + why));
}

struct Parser {
    const std::string& origin;

    const json& member(const json& obj, const std::string& path, const char* key) const {
        if (!obj.is_object()) fail(origin, path, "expected an object");
        const auto it = obj.find(key);
        if (it == obj.end()) fail(origin, path.empty() ? key : path + "." + key, "missing");
        return *it;
    }

    void known_keys(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) const {
        if (!obj.is_object()) fail(origin, path, "expected an object");
        for (const auto& [k, v] : obj.items())
            if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
                fail(origin, path.empty() ? k : path + "." + k, "unknown key");
    }

    double number(const json& v, const std::string& path) const {
        if (!v.is_number()) fail(origin, path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(origin, path, "must be finite");
        return d;
    }

    int integer(const json& v, const std::string& path) const {
        if (!v.is_number_integer()) fail(origin, path, "expected an integer");
        return v.get<int>();
    }

    Vec2 point(const json& v, const std::string& path) const {
        if (!v.is_array() || v.size() != 2) fail(origin, path, "expected [x, y]");
        return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
    }
};

MultiPolygon parse_region(const Parser& p, const json& jr) {
    if (!jr.is_array() || jr.size() < 3) fail(p.origin, "region", "expected >= 3 vertices");
    std::vector<Vec2> pts;
    pts.reserve(jr.size());
    for (std::size_t k = 0; k < jr.size(); ++k)
        pts.push_back(p.point(jr[k], "region[" + std::to_string(k) + "]"));

    double area2 = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Vec2 a = pts[k], b = pts[(k + 1) % pts.size()];
        area2 += a.cross(b);
    }
    double scale = 0.0;
    for (const Vec2& q : pts) scale = std::max(scale, std::max(std::abs(q.x), std::abs(q.y)));
    if (std::abs(area2) <= geom::kGeomEps * std::max(1.0, scale * scale))
        fail(p.origin, "region", "degenerate (zero area)");
    if (area2 < 0.0) std::reverse(pts.begin(), pts.end()); // CW input: normalize

    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Vec2 e0 = pts[(k + 1) % pts.size()] - pts[k];
        const Vec2 e1 = pts[(k + 2) % pts.size()] - pts[(k + 1) % pts.size()];
        if (e0.norm() <= geom::kGeomEps)
            fail(p.origin, "region[" + std::to_string(k) + "]", "repeated vertex");
        if (e0.cross(e1) < -geom::kGeomEps * e0.norm() * e1.norm())
            fail(p.origin, "region", "not convex");
    }
    return MultiPolygon::from_ring(geom::Ring::from_points(pts, geom::EdgeLabel::region()));
}

sensing::BasePattern parse_base_pattern(const Parser& p, const json& jb) {
    p.known_keys(jb, "base_pattern", {"ellipse", "polygon"});
    const bool has_e = jb.contains("ellipse"), has_p = jb.contains("polygon");
    if (has_e == has_p)
        fail(p.origin, "base_pattern", "need exactly one of 'ellipse' or 'polygon'");
    try {
        if (has_e) {
            const json& je = jb["ellipse"];
            p.known_keys(je, "base_pattern.ellipse", {"a", "b", "n_vertices"});
            const double a = p.number(p.member(je, "base_pattern.ellipse", "a"),
                                      "base_pattern.ellipse.a");
            const double b = p.number(p.member(je, "base_pattern.ellipse", "b"),
                                      "base_pattern.ellipse.b");
            int n = 60;
            if (je.contains("n_vertices")) n = p.integer(je["n_vertices"], "base_pattern.ellipse.n_vertices");
            return sensing::make_ellipse_pattern(a, b, n);
        }
        const json& jp = jb["polygon"];
        p.known_keys(jp, "base_pattern.polygon", {"vertices"});
        const json& jv = p.member(jp, "base_pattern.polygon", "vertices");
        if (!jv.is_array()) fail(p.origin, "base_pattern.polygon.vertices", "expected an array");
        std::vector<Vec2> verts;
        for (std::size_t k = 0; k < jv.size(); ++k)
            verts.push_back(p.point(jv[k], "base_pattern.polygon.vertices[" + std::to_string(k) + "]"));
        return sensing::make_polygon_pattern(std::move(verts));
    } catch (const std::invalid_argument& e) {
        fail(p.origin, "base_pattern", e.what());
    }
}

objective::DensityField parse_density(const Parser& p, const json& jd) {
    p.known_keys(jd, "density", {"uniform", "gaussian_mixture"});
    const bool has_u = jd.contains("uniform"), has_g = jd.contains("gaussian_mixture");
    if (has_u == has_g)
        fail(p.origin, "density", "need exactly one of 'uniform' or 'gaussian_mixture'");
    try {
        if (has_u) {
            p.known_keys(jd["uniform"], "density.uniform", {"value"});
            return objective::DensityField::uniform(
                p.number(p.member(jd["uniform"], "density.uniform", "value"), "density.uniform.value"));
        }
        const json& jm = jd["gaussian_mixture"];
        p.known_keys(jm, "density.gaussian_mixture", {"components"});
        const json& jc = p.member(jm, "density.gaussian_mixture", "components");
        if (!jc.is_array()) fail(p.origin, "density.gaussian_mixture.components", "expected an array");
        std::vector<objective::GaussianComponent> comps;
        for (std::size_t k = 0; k < jc.size(); ++k) {
            const std::string path = "density.gaussian_mixture.components[" + std::to_string(k) + "]";
            p.known_keys(jc[k], path, {"weight", "center", "sigma"});
            objective::GaussianComponent c;
            c.weight = p.number(p.member(jc[k], path, "weight"), path + ".weight");
            c.center = p.point(p.member(jc[k], path, "center"), path + ".center");
            c.sigma = p.number(p.member(jc[k], path, "sigma"), path + ".sigma");
            comps.push_back(c);
        }
        return objective::DensityField::gaussian_mixture(std::move(comps));
    } catch (const std::invalid_argument& e) {
        fail(p.origin, "density", e.what());
    }
}

sim::Mode parse_mode(const Parser& p, const json& v, const std::string& path) {
    if (!v.is_string()) fail(p.origin, path, "expected a string");
    const std::string s = v.get<std::string>();
    if (s == "inscribed_disk") return sim::Mode::InscribedDisk;
    if (s == "fixed_yaw") return sim::Mode::FixedYaw;
    if (s == "full") return sim::Mode::Full;
    fail(p.origin, path, "expected one of 'inscribed_disk', 'fixed_yaw', 'full'");
}

const char* mode_name(sim::Mode m) {
    switch (m) {
        case sim::Mode::InscribedDisk: return "inscribed_disk";
        case sim::Mode::FixedYaw: return "fixed_yaw";
        case sim::Mode::Full: return "full";
    }
    return "full";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(origin + ": " + e.what());
    }
    const Parser p{origin};
    p.known_keys(j, "", {"provenance", "region", "base_pattern", "bounds", "agents", "density",
                         "gains", "sim"});

    ScenarioFile sf;
    if (j.contains("provenance")) {
        if (!j["provenance"].is_string()) fail(origin, "provenance", "expected a string");
        sf.provenance = j["provenance"].get<std::string>();
    }

    const json& jb = p.member(j, "", "bounds");
    p.known_keys(jb, "bounds", {"z_min", "z_max"});
    sf.scene.bounds.z_min = p.number(p.member(jb, "bounds", "z_min"), "bounds.z_min");
    sf.scene.bounds.z_max = p.number(p.member(jb, "bounds", "z_max"), "bounds.z_max");
    if (!sf.scene.bounds.valid()) fail(origin, "bounds", "need 0 < z_min < z_max");

    sf.scene.region = parse_region(p, p.member(j, "", "region"));
    sf.scene.base = parse_base_pattern(p, p.member(j, "", "base_pattern"));
    sf.scene.phi = parse_density(p, p.member(j, "", "density"));

    const json& ja = p.member(j, "", "agents");
    if (!ja.is_array() || ja.empty()) fail(origin, "agents", "expected a non-empty array");
    for (std::size_t k = 0; k < ja.size(); ++k) {
        const std::string path = "agents[" + std::to_string(k) + "]";
        p.known_keys(ja[k], path, {"x", "y", "z", "theta"});
        sensing::AgentState a;
        a.id = static_cast<int>(k) + 1;
        a.q.x = p.number(p.member(ja[k], path, "x"), path + ".x");
        a.q.y = p.number(p.member(ja[k], path, "y"), path + ".y");
        a.z = p.number(p.member(ja[k], path, "z"), path + ".z");
        a.theta = p.number(p.member(ja[k], path, "theta"), path + ".theta");
        if (a.z < sf.scene.bounds.z_min || a.z > sf.scene.bounds.z_max)
            fail(origin, path + ".z",
                 "outside bounds [" + fmt17(sf.scene.bounds.z_min) + ", " +
                     fmt17(sf.scene.bounds.z_max) + "]");
        if (!geom::contains_point(sf.scene.region, a.q))
            fail(origin, path, "initial position outside the region");
        sf.scene.agents.push_back(a);
    }

    if (j.contains("gains")) {
        const json& jg = j["gains"];
        p.known_keys(jg, "gains", {"alpha_q", "alpha_z", "alpha_theta"});
        if (jg.contains("alpha_q")) sf.gains.alpha_q = p.number(jg["alpha_q"], "gains.alpha_q");
        if (jg.contains("alpha_z")) sf.gains.alpha_z = p.number(jg["alpha_z"], "gains.alpha_z");
        if (jg.contains("alpha_theta"))
            sf.gains.alpha_theta = p.number(jg["alpha_theta"], "gains.alpha_theta");
    }

    if (j.contains("sim")) {
        const json& js = j["sim"];
        p.known_keys(js, "sim", {"dt", "max_steps", "convergence_tol", "mode"});
        if (js.contains("dt")) sf.sim_config.dt = p.number(js["dt"], "sim.dt");
        if (js.contains("max_steps"))
            sf.sim_config.max_steps = p.integer(js["max_steps"], "sim.max_steps");
        if (js.contains("convergence_tol"))
            sf.sim_config.convergence_tol = p.number(js["convergence_tol"], "sim.convergence_tol");
        if (js.contains("mode")) sf.sim_config.mode = parse_mode(p, js["mode"], "sim.mode");
        if (!(sf.sim_config.dt > 0.0)) fail(origin, "sim.dt", "must be positive");
        if (sf.sim_config.max_steps <= 0) fail(origin, "sim.max_steps", "must be positive");
        if (!(sf.sim_config.convergence_tol >= 0.0))
            fail(origin, "sim.convergence_tol", "must be >= 0");
    }
    return sf;
}

ScenarioFile parse_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path + ": cannot open file");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario_text(text, path);
}

std::string serialize_scenario(const ScenarioFile& sf) {
    json j;
    if (!sf.provenance.empty()) j["provenance"] = sf.provenance;

    json region = json::array();
    for (const Vec2& q : sf.scene.region.parts.at(0).outer.pts) region.push_back({q.x, q.y});
    j["region"] = std::move(region);

    if (sf.scene.base.kind == sensing::BasePattern::Kind::Ellipse) {
        j["base_pattern"]["ellipse"] = {{"a", sf.scene.base.a},
                                        {"b", sf.scene.base.b},
                                        {"n_vertices", sf.scene.base.sampled.size()}};
    } else {
        json verts = json::array();
        for (const Vec2& q : sf.scene.base.sampled.pts) verts.push_back({q.x, q.y});
        j["base_pattern"]["polygon"] = {{"vertices", std::move(verts)}};
    }

    j["bounds"] = {{"z_min", sf.scene.bounds.z_min}, {"z_max", sf.scene.bounds.z_max}};

    json agents = json::array();
    for (const auto& a : sf.scene.agents)
        agents.push_back({{"x", a.q.x}, {"y", a.q.y}, {"z", a.z}, {"theta", a.theta}});
    j["agents"] = std::move(agents);

    if (sf.scene.phi.kind == objective::DensityField::Kind::Uniform) {
        j["density"]["uniform"] = {{"value", sf.scene.phi.value}};
    } else {
        json comps = json::array();
        for (const auto& c : sf.scene.phi.components)
            comps.push_back({{"weight", c.weight},
                             {"center", {c.center.x, c.center.y}},
                             {"sigma", c.sigma}});
        j["density"]["gaussian_mixture"] = {{"components", std::move(comps)}};
    }

    j["gains"] = {{"alpha_q", sf.gains.alpha_q},
                  {"alpha_z", sf.gains.alpha_z},
                  {"alpha_theta", sf.gains.alpha_theta}};
    j["sim"] = {{"dt", sf.sim_config.dt},
                {"max_steps", sf.sim_config.max_steps},
                {"convergence_tol", sf.sim_config.convergence_tol},
                {"mode", mode_name(sf.sim_config.mode)}};
    return j.dump(2) + "\n";
}

namespace {

void append_path(std::string& d, const MultiPolygon& mp, const char* fmt_point) {
    char buf[96];
    auto emit_ring = [&](const geom::Ring& ring) {
        for (std::size_t k = 0; k < ring.pts.size(); ++k) {
            std::snprintf(buf, sizeof buf, fmt_point, k == 0 ? 'M' : 'L', ring.pts[k].x,
                          -ring.pts[k].y);
            d += buf;
        }
        d += "Z";
    };
    for (const auto& part : mp.parts) {
        emit_ring(part.outer);
        for (const auto& hole : part.holes) emit_ring(hole);
    }
}

} // namespace

std::string render_frame_svg(const std::vector<sensing::AgentState>& states,
                             const sensing::BasePattern& base,
                             const sensing::AltitudeBounds& bounds,
                             const partition::PartitionResult& part,
                             const MultiPolygon& region) {
    std::vector<MultiPolygon> footprints;
    footprints.reserve(states.size());
    for (const auto& a : states) footprints.push_back(sensing::footprint(a, base, bounds));

    geom::BBox box = geom::bbox(region);
    for (const auto& fp : footprints) {
        const geom::BBox b = geom::bbox(fp);
        box.xmin = std::min(box.xmin, b.xmin);
        box.ymin = std::min(box.ymin, b.ymin);
        box.xmax = std::max(box.xmax, b.xmax);
        box.ymax = std::max(box.ymax, b.ymax);
    }
    const double diag = std::hypot(box.xmax - box.xmin, box.ymax - box.ymin);
    const double margin = 0.03 * diag;
    const double sw = diag / 600.0;

    char buf[256];
    std::string svg;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6g %.6g %.6g %.6g\">\n",
                  box.xmin - margin, -box.ymax - margin, box.xmax - box.xmin + 2 * margin,
                  box.ymax - box.ymin + 2 * margin);
    svg += buf;

    auto path_element = [&](const MultiPolygon& mp, const std::string& style) {
        if (mp.empty()) return;
        std::string d;
        append_path(d, mp, "%c%.6g %.6g");
        svg += "<path d=\"" + d + "\" " + style + "/>\n";
    };

    std::snprintf(buf, sizeof buf, "fill=\"#f7f7f2\" stroke=\"#333333\" stroke-width=\"%.6g\"",
                  1.5 * sw);
    path_element(region, buf);

    for (const auto& t : part.tied_regions)
        path_element(t.region, "fill=\"#b5b5b5\" fill-rule=\"evenodd\" stroke=\"none\"");

    std::snprintf(buf, sizeof buf,
                  "fill=\"#dbe6f1\" fill-rule=\"evenodd\" stroke=\"#111111\" stroke-width=\"%.6g\"",
                  sw);
    for (const auto& [id, cell] : part.cells) path_element(cell, buf);

    std::snprintf(buf, sizeof buf,
                  "fill=\"none\" stroke=\"#cc2222\" stroke-width=\"%.6g\" "
                  "stroke-dasharray=\"%.6g %.6g\"",
                  sw, 4 * sw, 3 * sw);
    for (const auto& fp : footprints) path_element(fp, buf);

    for (const auto& a : states) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.6g\" cy=\"%.6g\" r=\"%.6g\" fill=\"#111111\"/>\n",
                      a.q.x, -a.q.y, 2.5 * sw);
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.6g\" y=\"%.6g\" font-size=\"%.6g\" font-family=\"monospace\" "
                      "fill=\"#111111\">%d</text>\n",
                      a.q.x + 4 * sw, -a.q.y - 4 * sw, 14 * sw, a.id);
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

void render_frame(const std::vector<sensing::AgentState>& states, const sensing::BasePattern& base,
                  const sensing::AltitudeBounds& bounds, const partition::PartitionResult& part,
                  const MultiPolygon& region, const std::string& path) {
    write_file(path, render_frame_svg(states, base, bounds, part, region));
}

std::string write_outputs(const sim::TrajectoryLog& log, const ScenarioFile& sf,
                          const std::string& dir, int frames_every) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error(dir + ": " + ec.message());

    std::string traj = "t,id,x,y,z,theta,u_x,u_y,u_z,omega\n";
    char buf[512];
    for (const auto& rec : log.records)
        for (std::size_t k = 0; k < rec.states.size(); ++k) {
            const auto& a = rec.states[k];
            const auto& u = rec.inputs[k];
            std::snprintf(buf, sizeof buf,
                          "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.t,
                          a.id, a.q.x, a.q.y, a.z, a.theta, u.u_q.x, u.u_q.y, u.u_z, u.omega);
            traj += buf;
        }
    write_file(fs::path(dir) / "trajectory.csv", traj);

    std::string metrics = "t,H,covered_fraction\n";
    for (const auto& rec : log.records) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", rec.t, rec.metrics.H,
                      rec.metrics.covered_fraction);
        metrics += buf;
    }
    write_file(fs::path(dir) / "metrics.csv", metrics);

    std::vector<std::string> frame_files;
    if (frames_every > 0) {
        auto emit = [&](const std::vector<sensing::AgentState>& states, long step) {
            const auto part = partition::compute_partition(states, sf.scene.base, sf.scene.region,
                                                           sf.scene.bounds);
            std::snprintf(buf, sizeof buf, "frame_%06ld.svg", step);
            render_frame(states, sf.scene.base, sf.scene.bounds, part, sf.scene.region,
                         (fs::path(dir) / buf).string());
            frame_files.emplace_back(buf);
        };
        emit(sf.scene.agents, 0);
        for (std::size_t k = 0; k < log.records.size(); ++k)
            if ((k + 1) % static_cast<std::size_t>(frames_every) == 0 ||
                k + 1 == log.records.size())
                emit(log.records[k].states, static_cast<long>(k) + 1);
    }

    const objective::Metrics& fin =
        log.records.empty() ? log.initial_metrics : log.records.back().metrics;
    json m;
    m["scenario"] = json::parse(serialize_scenario(sf));
    m["run"] = {
        {"steps", log.records.size()},
        {"converged", log.converged},
        {"ascent_violations", log.ascent_violations},
        {"initial",
         {{"H", log.initial_metrics.H},
          {"covered_fraction", log.initial_metrics.covered_fraction},
          {"control_H", log.initial_control_H}}},
        {"final",
         {{"H", fin.H},
          {"covered_fraction", fin.covered_fraction},
          {"control_H", log.records.empty() ? log.initial_control_H
                                            : log.records.back().control_H}}},
    };
    m["outputs"] = {{"trajectory", "trajectory.csv"},
                    {"metrics", "metrics.csv"},
                    {"frames", frame_files}};
    m["versions"] = {{"aircov", "0.1.0"},
                     {"schema", 1},
                     {"kernel_backend", kernels::active_backend().name}};
    const std::string manifest = m.dump(2) + "\n";
    write_file(fs::path(dir) / "manifest.json", manifest);
    return manifest;
}

} // namespace aircov::io
