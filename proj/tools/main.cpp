#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "aircov/io.hpp"
#include "aircov/partition.hpp"

namespace {

using namespace aircov;

struct RunOptions {
    std::string scenario;
    std::string out = "out";
    int frames = 0;
    std::string mode; // empty: keep the scenario's mode
    double dt = 0.0;  // 0: keep
    int steps = 0;    // 0: keep
};

int cmd_run(const RunOptions& opt) {
    io::ScenarioFile sf = io::parse_scenario(opt.scenario);
    if (!opt.mode.empty()) {
        if (opt.mode == "inscribed")
            sf.sim_config.mode = sim::Mode::InscribedDisk;
        else if (opt.mode == "fixed-yaw")
            sf.sim_config.mode = sim::Mode::FixedYaw;
        else
            sf.sim_config.mode = sim::Mode::Full;
    }
    if (opt.dt > 0.0) sf.sim_config.dt = opt.dt;
    if (opt.steps > 0) sf.sim_config.max_steps = opt.steps;

    const sim::TrajectoryLog log = sim::run(sf.scene, sf.gains, sf.sim_config);
    io::write_outputs(log, sf, opt.out, opt.frames);

    const auto& fin = log.records.empty() ? log.initial_metrics : log.records.back().metrics;
    std::printf("steps: %zu%s\n", log.records.size(), log.converged ? " (converged)" : "");
    std::printf("H: %.6g -> %.6g\n", log.initial_metrics.H, fin.H);
    std::printf("covered fraction: %.6g -> %.6g\n", log.initial_metrics.covered_fraction,
                fin.covered_fraction);
    std::printf("ascent violations: %d\n", log.ascent_violations);
    std::printf("outputs: %s\n", opt.out.c_str());
    return 0;
}

int cmd_check_gradient(const std::string& scenario, double delta) {
    const io::ScenarioFile sf = io::parse_scenario(scenario);
    const auto part = partition::compute_partition(sf.scene.agents, sf.scene.base,
                                                   sf.scene.region, sf.scene.bounds);
    const auto cb = partition::classify_boundaries(part, sf.scene.agents, sf.scene.base,
                                                   sf.scene.bounds);
    const control::Gains unit; // report raw gradients, gains divided out

    bool all_ok = true;
    std::printf("%-6s %-6s %14s %14s %10s  %s\n", "agent", "comp", "analytic", "fd", "|diff|",
                "status");
    for (const auto& a : sf.scene.agents) {
        const geom::Vec2 uq =
            control::control_planar(a.id, cb, sf.scene.agents, sf.scene.phi, sf.scene.bounds, unit);
        const double uz = control::control_altitude(a.id, cb, part, sf.scene.agents, sf.scene.phi,
                                                    sf.scene.bounds, unit);
        const double om = control::control_yaw(a.id, cb, sf.scene.agents, sf.scene.base,
                                               sf.scene.phi, sf.scene.bounds, unit);
        const std::pair<control::StateComponent, double> comps[] = {
            {control::StateComponent::QX, uq.x},
            {control::StateComponent::QY, uq.y},
            {control::StateComponent::Z, uz},
            {control::StateComponent::Theta, om},
        };
        static const char* names[] = {"x", "y", "z", "theta"};
        for (std::size_t c = 0; c < 4; ++c) {
            const auto [comp, got] = comps[c];
            if (control::fd_crosses_topology_change(a.id, comp, sf.scene, delta)) {
                std::printf("%-6d %-6s %14s %14s %10s  excluded (topology change)\n", a.id,
                            names[c], "-", "-", "-");
                continue;
            }
            const double fd = control::fd_gradient_oracle(a.id, comp, sf.scene, delta);
            const double diff = std::abs(got - fd);
            const bool ok = diff <= std::max(1e-3 * std::abs(fd), 1e-6);
            all_ok = all_ok && ok;
            std::printf("%-6d %-6s %14.6e %14.6e %10.2e  %s\n", a.id, names[c], got, fd, diff,
                        ok ? "ok" : "MISMATCH");
        }
    }
    return all_ok ? 0 : 1;
}

int cmd_metrics(const std::string& scenario) {
    const io::ScenarioFile sf = io::parse_scenario(scenario);
    const auto part = partition::compute_partition(sf.scene.agents, sf.scene.base,
                                                   sf.scene.region, sf.scene.bounds);
    const auto m = objective::evaluate_objective(part, sf.scene.agents, sf.scene.phi,
                                                 sf.scene.bounds);
    std::printf("H: %.12g\n", m.H);
    std::printf("covered_fraction: %.12g\n", m.covered_fraction);
    for (std::size_t k = 0; k < m.per_agent_cell_area.size(); ++k)
        std::printf("cell_area[%d]: %.12g\n", sf.scene.agents[k].id, m.per_agent_cell_area[k]);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistent-coverage simulator for aerial agents"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Simulate a scenario and write outputs");
    run->add_option("scenario", run_opt.scenario, "Scenario JSON file")->required();
    run->add_option("--out", run_opt.out, "Output directory (default: out)");
    run->add_option("--frames", run_opt.frames, "Render an SVG frame every N steps (0: none)");
    run->add_option("--mode", run_opt.mode, "Override the scenario's control mode")
        ->check(CLI::IsMember({"inscribed", "fixed-yaw", "full"}));
    run->add_option("--dt", run_opt.dt, "Override the time step");
    run->add_option("--steps", run_opt.steps, "Override the step cap");

    std::string cg_scenario;
    double cg_delta = 1e-5;
    CLI::App* cg = app.add_subcommand(
        "check-gradient", "Compare control laws against finite differences at the initial state");
    cg->add_option("scenario", cg_scenario, "Scenario JSON file")->required();
    cg->add_option("--delta", cg_delta, "Central-difference step");

    std::string m_scenario;
    CLI::App* met =
        app.add_subcommand("metrics", "Evaluate the objective and coverage of the initial state");
    met->add_option("scenario", m_scenario, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (cg->parsed()) return cmd_check_gradient(cg_scenario, cg_delta);
        if (met->parsed()) return cmd_metrics(m_scenario);
    } catch (const io::ScenarioError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::logic_error& e) {
        std::fprintf(stderr, "internal consistency error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
