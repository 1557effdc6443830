#include "crossguard/bench.hpp"
#include "crossguard/efficient_scheduler.hpp"
#include "crossguard/errors.hpp"
#include "crossguard/exact_scheduler.hpp"
#include "crossguard/scenario.hpp"
#include "crossguard/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace cg = crossguard;

namespace {

constexpr int kExitNo = 2;
constexpr int kExitInfeasible = 3;

int cmd_simulate(const std::string& scenario, const std::string& mode, const std::string& trace,
                 const std::string& metrics, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> steps, bool no_wall)
{
    cg::ScenarioConfig cfg = cg::load_scenario(scenario);
    if (seed)
        cfg.seed = *seed;
    if (steps)
        cfg.steps = *steps;
    cg::SimulationOptions opts;
    opts.record_wall_time = !no_wall;
    const auto m = mode == "exact" ? cg::SupervisorMode::Exact : cg::SupervisorMode::Efficient;
    const cg::SimulationResult r = cg::run_simulation(cfg, m, opts);
    cg::emit_outputs(r.trace, r.metrics, trace, metrics);
    cg::write_metrics(std::cout, r.metrics);
    return 0;
}

int cmd_verify(const std::string& scenario, const std::string& mode)
{
    const cg::ScenarioConfig cfg = cg::load_scenario(scenario);
    const auto fleet = cfg.fleet();
    const auto models = cg::make_models(fleet, cfg.tau / 10.0);
    std::vector<cg::StateInterval> est;
    for (const auto& v : cfg.vehicles)
        est.push_back(cg::initial_estimate(v, v.initial));
    cg::VerifyOptions opts;
    opts.dynamics.step = cfg.tau / 10.0;
    const cg::Verdict verdict =
        mode == "exact" ? cg::exact_verify(models, est, opts) : cg::approx_verify(models, est, opts);
    std::cout << (verdict.yes ? "yes" : "no") << '\n';
    if (verdict.schedule) {
        for (const auto& [vehicle, t] : verdict.schedule->entry) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", t);
            std::cout << "vehicle " << cfg.vehicles[vehicle].id << " entry " << buf << '\n';
        }
    }
    return verdict.yes ? 0 : kExitNo;
}

int cmd_bench(const std::string& scenario, const std::vector<std::size_t>& ns, std::size_t reps,
              const cg::BenchOptions& opts)
{
    const cg::ScenarioConfig cfg = cg::load_scenario(scenario);
    const auto rows = cg::bench_scaling(cfg, ns, reps, opts);
    cg::write_bench_table(std::cout, rows);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Intersection collision-avoidance supervisor: simulation, verification, timing"};
    app.require_subcommand(1);

    std::string scenario, mode, trace, metrics;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps;
    bool no_wall = false;
    auto* sim = app.add_subcommand("simulate", "Run a seeded closed-loop simulation");
    sim->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    sim->add_option("--mode", mode, "Supervisor mode")->required()->check(CLI::IsMember({"exact", "efficient"}));
    sim->add_option("--trace", trace, "Trace CSV output path")->required();
    sim->add_option("--metrics", metrics, "Metrics output path")->required();
    sim->add_option("--seed", seed, "Override the scenario seed");
    sim->add_option("--steps", steps, "Override the step horizon");
    sim->add_flag("--no-wall-time", no_wall, "Write zero wall times for byte-reproducible output");

    std::string vscenario, vmode;
    auto* ver = app.add_subcommand("verify", "Check the initial condition (exit 0 = yes, 2 = no)");
    ver->add_option("--scenario", vscenario, "Scenario file")->required()->check(CLI::ExistingFile);
    ver->add_option("--mode", vmode, "Verifier")->required()->check(CLI::IsMember({"exact", "approx"}));

    std::string bscenario;
    std::vector<std::size_t> ns;
    std::size_t reps = 3;
    cg::BenchOptions bopts;
    auto* ben = app.add_subcommand("bench", "Per-iteration timing versus controlled-vehicle count");
    ben->add_option("--scenario", bscenario, "Template scenario file")->required()->check(CLI::ExistingFile);
    ben->add_option("--n", ns, "Controlled-vehicle counts, comma separated")->required()->delimiter(',');
    ben->add_option("--reps", reps, "Repetitions per count")->required();
    ben->add_option("--steps", bopts.steps, "Supervisor steps per repetition")->capture_default_str();
    ben->add_option("--budget", bopts.budget_s, "Per-iteration budget in seconds")->capture_default_str();
    ben->add_option("--exact-cap", bopts.exact_cap, "Largest n run in exact mode")->capture_default_str();
    ben->add_option("--permutation-cap", bopts.permutation_cap, "Sequences tried before exact mode gives up")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim)
            return cmd_simulate(scenario, mode, trace, metrics, seed, steps, no_wall);
        if (*ver)
            return cmd_verify(vscenario, vmode);
        if (*ben)
            return cmd_bench(bscenario, ns, reps, bopts);
    } catch (const cg::InfeasibleInitialCondition& e) {
        std::cerr << "infeasible initial condition: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
