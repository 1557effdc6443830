#include "crossguard/bench.hpp"

#include "crossguard/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace crossguard {

ScenarioConfig scale_scenario(const ScenarioConfig& tmpl, std::size_t n_controlled, double spacing)
{
    auto proto = std::find_if(tmpl.vehicles.begin(), tmpl.vehicles.end(),
                              [](const VehicleSpec& v) { return v.params.controlled; });
    if (proto == tmpl.vehicles.end())
        throw ScenarioError("scale_scenario: template has no controlled vehicle");
    ScenarioConfig out = tmpl;
    out.vehicles.clear();
    int next_id = 1;
    for (std::size_t k = 0; k < n_controlled; ++k) {
        VehicleSpec v = *proto;
        v.id = next_id++;
        v.initial.y = proto->initial.y - spacing * static_cast<double>(k);
        out.vehicles.push_back(v);
    }
    for (const auto& v : tmpl.vehicles) {
        if (v.params.controlled)
            continue;
        VehicleSpec u = v;
        u.id = next_id++;
        u.initial.y -= spacing * static_cast<double>(n_controlled - 1);
        out.vehicles.push_back(u);
    }
    return out;
}

std::vector<BenchRow> bench_scaling(const ScenarioConfig& tmpl, std::span<const std::size_t> n_controlled,
                                    std::size_t repetitions, const BenchOptions& opts)
{
    std::vector<BenchRow> rows;
    for (std::size_t n : n_controlled) {
        for (SupervisorMode mode : {SupervisorMode::Efficient, SupervisorMode::Exact}) {
            BenchRow row;
            row.n = n;
            row.mode = mode;
            row.status = "ok";
            if (mode == SupervisorMode::Exact && n > opts.exact_cap) {
                row.status = "skipped";
                rows.push_back(row);
                continue;
            }
            std::vector<double> times;
            for (std::size_t rep = 0; rep < repetitions && row.status == "ok"; ++rep) {
                ScenarioConfig cfg = scale_scenario(tmpl, n);
                cfg.seed = tmpl.seed + rep;
                cfg.steps = std::min(cfg.steps, opts.steps);
                SimulationOptions sim;
                sim.iteration_budget_s = opts.budget_s;
                if (mode == SupervisorMode::Exact)
                    sim.permutation_cap = opts.permutation_cap;
                try {
                    const SimulationResult r = run_simulation(cfg, mode, sim);
                    times.insert(times.end(), r.iteration_s.begin(), r.iteration_s.end());
                    if (r.budget_exceeded)
                        row.status = "budget";
                } catch (const PermutationCapExceeded&) {
                    row.status = "cap";
                } catch (const InfeasibleInitialCondition&) {
                    row.status = "infeasible";
                }
            }
            row.iterations = times.size();
            if (!times.empty()) {
                std::sort(times.begin(), times.end());
                row.median_s = times[times.size() / 2];
                row.max_s = times.back();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

void write_bench_table(std::ostream& os, std::span<const BenchRow> rows)
{
    os << "n,mode,median_s,max_s,iterations,status\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%s,%.6g,%.6g,%zu,%s\n", r.n,
                      r.mode == SupervisorMode::Exact ? "exact" : "efficient", r.median_s, r.max_s,
                      r.iterations, r.status.c_str());
        os << buf;
    }
}

} // namespace crossguard
