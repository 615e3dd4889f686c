// Acceptance gate: nine end-to-end checks against independent oracles, one
// pass/fail line each.  Exit status is the number of failed checks.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "aircov/control.hpp"
#include "aircov/geom/clip.hpp"
#include "aircov/io.hpp"
#include "aircov/objective.hpp"
#include "aircov/partition.hpp"
#include "aircov/sensing.hpp"
#include "aircov/sim.hpp"
#include "support/altitude_oracle.hpp"
#include "support/grid_oracle.hpp"
#include "support/shapes.hpp"

using namespace aircov;
using geom::MultiPolygon;
using geom::Vec2;
using sensing::AgentState;

namespace {

const sensing::AltitudeBounds kBounds{0.3, 2.3};

struct Outcome {
    bool ok = true;
    std::string note;

    void fail(const std::string& why) {
        ok = false;
        note += (note.empty() ? "" : "; ") + why;
    }
    void add(const std::string& info) { note += (note.empty() ? "" : "; ") + info; }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Scene square_scene(std::vector<AgentState> agents, sensing::BasePattern base, double half,
                   objective::DensityField phi = objective::DensityField::uniform(1.0)) {
    return Scene{std::move(agents), std::move(base),
                 testsupport::make_rect(-half, -half, half, half, geom::EdgeLabel::region()),
                 kBounds, std::move(phi)};
}

std::string scenario_path(const char* name) {
    return std::string(AIRCOV_SCENARIO_DIR) + "/" + name;
}

// --- 1: quality anchors and extremal slope -------------------------------

Outcome quality_anchors() {
    Outcome out;
    if (sensing::quality(0.3, kBounds) != 1.0) out.fail("quality(z_min) != 1");
    if (sensing::quality(2.3, kBounds) != 0.0) out.fail("quality(z_max) != 0");

    const int n = 10000;
    double min_fd = std::numeric_limits<double>::infinity(), argmin = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = 0.3 + 2.0 * k / (n - 1);
        const double fd = sensing::quality_derivative(z, kBounds);
        if (fd < min_fd) {
            min_fd = fd;
            argmin = z;
        }
    }
    const double want = -8.0 * std::sqrt(3.0) / 18.0;
    const double z_want = 0.3 + 2.0 / std::sqrt(3.0);
    if (std::abs(min_fd - want) > 1e-6)
        out.fail(fmt("min slope %.8f vs %.8f", min_fd, want));
    if (std::abs(argmin - z_want) > 2.0 / (n - 1) + 1e-12)
        out.fail(fmt("argmin %.5f vs %.5f", argmin, z_want));
    out.add(fmt("min f' = %.7f at z = %.4f", min_fd, argmin));
    return out;
}

// --- 2: control laws vs central finite differences -----------------------

Outcome gradient_consistency() {
    Outcome out;
    std::mt19937 rng(90210);
    const auto base = sensing::make_ellipse_pattern(0.2, 0.12, 120);
    std::uniform_real_distribution<double> X(-1.1, 1.1), Z(0.4, 1.8), TH(0.0, 6.28);
    std::uniform_real_distribution<double> C(-0.8, 0.8), SIG(0.3, 0.6), W(0.5, 2.0);
    std::uniform_int_distribution<int> N(2, 5);
    const double delta = 1e-5;

    int compared = 0, excluded = 0, failures = 0, crossing_scenarios = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<AgentState> agents;
        const int n = N(rng);
        for (int k = 0; k < n; ++k) agents.push_back({k + 1, {X(rng), X(rng)}, Z(rng), TH(rng)});
        objective::DensityField phi =
            trial % 2 == 0 ? objective::DensityField::uniform(1.0)
                           : objective::DensityField::gaussian_mixture(
                                 {{W(rng), {C(rng), C(rng)}, SIG(rng)},
                                  {W(rng), {C(rng), C(rng)}, SIG(rng)}});
        const Scene s = square_scene(std::move(agents), base, 1.2, std::move(phi));

        bool crosses = false;
        for (const auto& a : s.agents) {
            const auto fp = sensing::footprint(a, s.base, s.bounds);
            if (geom::area(geom::difference(fp, s.region)) > 1e-9) crosses = true;
        }
        crossing_scenarios += crosses ? 1 : 0;

        const auto part = partition::compute_partition(s.agents, s.base, s.region, s.bounds);
        const auto cb = partition::classify_boundaries(part, s.agents, s.base, s.bounds);
        for (const auto& a : s.agents) {
            const Vec2 uq = control::control_planar(a.id, cb, s.agents, s.phi, s.bounds, {});
            const double uz =
                control::control_altitude(a.id, cb, part, s.agents, s.phi, s.bounds, {});
            const double om =
                control::control_yaw(a.id, cb, s.agents, s.base, s.phi, s.bounds, {});
            const std::pair<control::StateComponent, double> comps[] = {
                {control::StateComponent::QX, uq.x},
                {control::StateComponent::QY, uq.y},
                {control::StateComponent::Z, uz},
                {control::StateComponent::Theta, om},
            };
            for (const auto& [comp, got] : comps) {
                if (control::fd_crosses_topology_change(a.id, comp, s, delta)) {
                    ++excluded;
                    continue;
                }
                const double fd = control::fd_gradient_oracle(a.id, comp, s, delta);
                ++compared;
                const double err = std::abs(got - fd);
                const double tol = std::max(1e-3 * std::abs(fd), 1e-6);
                worst = std::max(worst, err / tol);
                if (err > tol) ++failures;
            }
        }
    }
    const int draws = compared + excluded;
    if (failures > 0) out.fail(fmt("%d of %d comparisons out of tolerance", failures, compared));
    if (excluded * 5 >= draws)
        out.fail(fmt("topology exclusions %d/%d >= 20%%", excluded, draws));
    if (crossing_scenarios == 0) out.fail("no scenario had a footprint crossing the region edge");
    out.add(fmt("%d compared, %d excluded, %d crossing scenes, worst err/tol %.2f", compared,
                excluded, crossing_scenarios, worst));
    return out;
}

// --- shared randomized scenario set for 3 and 4 --------------------------

struct RandomScene {
    std::vector<AgentState> agents;
    objective::DensityField phi;
};

std::vector<RandomScene> partition_scenarios() {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> X(-1.4, 1.4), Z(0.35, 2.2), TH(0.0, 6.28);
    std::uniform_real_distribution<double> U01(0.0, 1.0), C(-1.0, 1.0), SIG(0.3, 0.7);
    std::uniform_int_distribution<int> N(2, 5);

    std::vector<RandomScene> set;
    for (int trial = 0; trial < 50; ++trial) {
        RandomScene rs;
        const int n = N(rng);
        for (int k = 0; k < n; ++k) {
            double z = Z(rng);
            if (k > 0 && U01(rng) < 0.25) z = rs.agents[0].z; // exact quality ties
            rs.agents.push_back({k + 1, {X(rng), X(rng)}, z, TH(rng)});
        }
        rs.phi = trial % 2 == 0 ? objective::DensityField::uniform(1.0)
                                : objective::DensityField::gaussian_mixture(
                                      {{1.0, {C(rng), C(rng)}, SIG(rng)}});
        set.push_back(std::move(rs));
    }
    return set;
}

// --- 3: Monte-Carlo dominance and area closure ---------------------------

Outcome partition_oracle() {
    Outcome out;
    const auto base = sensing::make_ellipse_pattern(0.2, 0.12, 60);
    const MultiPolygon region =
        testsupport::make_rect(-1.5, -1.5, 1.5, 1.5, geom::EdgeLabel::region());
    const double region_area = 9.0;
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> Q(-1.5, 1.5);

    long checked = 0, agreed = 0;
    double worst_closure = 0.0;
    for (const auto& rs : partition_scenarios()) {
        const auto part = partition::compute_partition(rs.agents, base, region, kBounds);

        double total = geom::area(part.neutral);
        for (const auto& [id, c] : part.cells) total += geom::area(c);
        for (const auto& t : part.tied_regions) total += geom::area(t.region);
        worst_closure = std::max(worst_closure, std::abs(total - region_area) / region_area);

        std::vector<MultiPolygon> fps;
        for (const auto& a : rs.agents) fps.push_back(sensing::footprint(a, base, kBounds));

        for (int s = 0; s < 10000; ++s) {
            const Vec2 q{Q(rng), Q(rng)};
            bool near = std::abs(std::abs(q.x) - 1.5) < geom::kGeomEps ||
                        std::abs(std::abs(q.y) - 1.5) < geom::kGeomEps;
            for (const auto& fp : fps)
                if (geom::boundary_distance(fp, q) < geom::kGeomEps) near = true;
            if (near) continue;

            int best = -1;
            double best_z = 0.0;
            bool tie = false;
            for (std::size_t k = 0; k < rs.agents.size(); ++k) {
                if (!geom::contains_point(fps[k], q, 0.0)) continue;
                const double z = rs.agents[k].z;
                if (best < 0 || z < best_z - partition::kTieEps) {
                    best = rs.agents[k].id;
                    best_z = z;
                    tie = false;
                } else if (std::abs(z - best_z) <= partition::kTieEps) {
                    tie = true;
                }
            }
            ++checked;
            bool ok = false;
            if (best < 0) {
                ok = geom::contains_point(part.neutral, q, 0.0);
            } else if (tie) {
                for (const auto& t : part.tied_regions)
                    if (t.members.count(best) && geom::contains_point(t.region, q, 0.0)) ok = true;
            } else {
                ok = geom::contains_point(part.cells.at(best), q, 0.0);
            }
            agreed += ok ? 1 : 0;
        }
    }
    const double rate = double(agreed) / double(checked);
    if (rate < 0.999) out.fail(fmt("dominance agreement %.5f < 0.999", rate));
    if (worst_closure > 1e-6) out.fail(fmt("area closure off by %.2e relative", worst_closure));
    out.add(fmt("%ld/%ld points agreed (%.5f), worst closure %.2e", agreed, checked, rate,
                worst_closure));
    return out;
}

// --- 4: objective vs refined grid oracle ---------------------------------

Outcome objective_oracle() {
    Outcome out;
    const auto base = sensing::make_ellipse_pattern(0.2, 0.12, 60);
    const MultiPolygon region =
        testsupport::make_rect(-1.5, -1.5, 1.5, 1.5, geom::EdgeLabel::region());

    double worst = 0.0;
    int failures = 0;
    for (const auto& rs : partition_scenarios()) {
        const auto part = partition::compute_partition(rs.agents, base, region, kBounds);
        const double h = objective::evaluate_objective(part, rs.agents, rs.phi, kBounds).H;
        const double h_grid = testsupport::grid_objective(rs.agents, base, region, kBounds, rs.phi);
        const double rel = std::abs(h - h_grid) / std::max(std::abs(h_grid), 1e-12);
        worst = std::max(worst, rel);
        if (rel > 1e-3) ++failures;
    }
    if (failures > 0) out.fail(fmt("%d of 50 scenarios beyond 1e-3 relative", failures));
    out.add(fmt("worst relative gap %.2e", worst));
    return out;
}

// --- 5: single-agent stationary altitude vs bisection --------------------

Outcome stationary_altitude() {
    Outcome out;
    const double r_b = 0.2;
    const double z_star = testsupport::stationary_altitude_bisection(r_b, kBounds);

    Scene s = square_scene({{1, {0.0, 0.0}, 0.8, 0.0}}, sensing::make_ellipse_pattern(r_b, r_b, 120),
                           4.0);
    sim::SimConfig cfg;
    cfg.dt = 0.01;
    cfg.max_steps = 4000;
    cfg.convergence_tol = 1e-6;
    const auto log = sim::run(s, {}, cfg);
    const double z_end = log.records.empty() ? 0.8 : log.records.back().states.at(0).z;
    if (std::abs(z_end - z_star) > 1e-3)
        out.fail(fmt("settled at %.6f, bisection root %.6f", z_end, z_star));
    out.add(fmt("z -> %.6f vs root %.6f after %zu steps", z_end, z_star, log.records.size()));
    return out;
}

// --- 6: monotonic ascent at small dt on the bundled scenarios ------------

Outcome monotonic_ascent(double per_case_budget_s) {
    Outcome out;
    for (const char* name : {"case_study_1.json", "case_study_2.json", "case_study_3.json"}) {
        const auto t0 = std::chrono::steady_clock::now();
        auto sf = io::parse_scenario(scenario_path(name));
        sf.sim_config.dt = 1e-3;
        const auto log = sim::run(sf.scene, sf.gains, sf.sim_config);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (log.ascent_violations != 0)
            out.fail(fmt("%s: %d descent steps", name, log.ascent_violations));
        if (secs > per_case_budget_s) out.fail(fmt("%s took %.0fs", name, secs));
        out.add(fmt("%s: %d violations in %zu steps (%.0fs)", name, log.ascent_violations,
                    log.records.size(), secs));
    }
    return out;
}

// --- 7: mode ordering on the bundled benchmark ----------------------------

Outcome mode_ordering() {
    Outcome out;
    double H[3], cov[3];
    const char* names[3] = {"case_study_1.json", "case_study_2.json", "case_study_3.json"};
    for (int k = 0; k < 3; ++k) {
        const auto sf = io::parse_scenario(scenario_path(names[k]));
        const auto log = sim::run(sf.scene, sf.gains, sf.sim_config);
        const auto& fin =
            log.records.empty() ? log.initial_metrics : log.records.back().metrics;
        H[k] = fin.H;
        cov[k] = fin.covered_fraction;
    }
    // Index 0 = inscribed disk, 1 = fixed yaw, 2 = full.
    if (!(H[2] >= H[1] && H[1] >= H[0]))
        out.fail(fmt("H ordering broken: %.4f / %.4f / %.4f", H[0], H[1], H[2]));
    if (!(cov[2] >= cov[1] && cov[1] >= cov[0]))
        out.fail(fmt("coverage ordering broken: %.4f / %.4f / %.4f", cov[0], cov[1], cov[2]));
    if (!(H[2] - H[0] > 0.05 * H[2]))
        out.fail(fmt("full-vs-disk margin %.2f%% of full <= 5%%", 100.0 * (H[2] - H[0]) / H[2]));
    out.add(fmt("H disk/fixed/full = %.4f / %.4f / %.4f, coverage %.4f / %.4f / %.4f", H[0], H[1],
                H[2], cov[0], cov[1], cov[2]));
    return out;
}

// --- 8: circular patterns never yaw ---------------------------------------

Outcome circular_no_yaw() {
    Outcome out;
    Scene s = square_scene({{1, {0.7, 0.0}, 0.9, 0.4}, {2, {-0.2, 0.1}, 0.7, 1.3}},
                           sensing::make_ellipse_pattern(0.25, 0.25, 96), 1.0);
    sim::SimConfig cfg;
    cfg.dt = 0.01;
    cfg.max_steps = 100;
    cfg.convergence_tol = 0.0;
    cfg.mode = sim::Mode::Full;
    const auto log = sim::run(s, {}, cfg);
    double worst = 0.0;
    for (const auto& rec : log.records)
        for (const auto& u : rec.inputs) worst = std::max(worst, std::abs(u.omega));
    if (worst > 1e-9) out.fail(fmt("max |omega| = %.2e", worst));
    out.add(fmt("max |omega| over %zu steps = %.1e", log.records.size(), worst));
    return out;
}

// --- 9: byte-identical reruns ---------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    Outcome out;
    namespace fs = std::filesystem;
    const auto sf = io::parse_scenario(scenario_path("case_study_3.json"));
    const fs::path a = fs::temp_directory_path() / "aircov_accept_run_a";
    const fs::path b = fs::temp_directory_path() / "aircov_accept_run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    io::write_outputs(sim::run(sf.scene, sf.gains, sf.sim_config), sf, a.string());
    io::write_outputs(sim::run(sf.scene, sf.gains, sf.sim_config), sf, b.string());
    for (const char* name : {"trajectory.csv", "metrics.csv"}) {
        const std::string ba = slurp(a / name), bb = slurp(b / name);
        if (ba.empty()) out.fail(fmt("%s empty", name));
        if (ba != bb) out.fail(fmt("%s differs between runs", name));
    }
    if (out.ok) out.add("trajectory and metrics byte-identical across reruns");
    fs::remove_all(a);
    fs::remove_all(b);
    return out;
}

} // namespace

int main() {
    struct Criterion {
        const char* label;
        double budget_s;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"quality anchors and extremal slope", 1.0, quality_anchors},
        {"control laws vs finite differences", 120.0, gradient_consistency},
        {"partition vs Monte-Carlo dominance", 60.0, partition_oracle},
        {"objective vs grid oracle", 60.0, objective_oracle},
        {"stationary altitude vs bisection", 10.0, stationary_altitude},
        {"monotonic ascent on bundled runs", 360.0, [] { return monotonic_ascent(120.0); }},
        {"mode ordering on bundled runs", 300.0, mode_ordering},
        {"circular patterns never yaw", 10.0, circular_no_yaw},
        {"byte-identical reruns", 60.0, determinism},
    };

    int failed = 0;
    for (std::size_t k = 0; k < std::size(criteria); ++k) {
        const auto& c = criteria[k];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.fail(fmt("exception: %s", e.what()));
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) out.fail(fmt("runtime %.1fs over budget %.0fs", secs, c.budget_s));
        failed += out.ok ? 0 : 1;
        std::printf("criterion %zu (%s): %s (%.1fs)%s%s\n", k + 1, c.label,
                    out.ok ? "PASS" : "FAIL", secs, out.note.empty() ? "" : " -- ",
                    out.note.c_str());
        std::fflush(stdout);
    }
    return failed;
}
