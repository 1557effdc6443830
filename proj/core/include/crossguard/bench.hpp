#pragma once

#include "crossguard/scenario.hpp"
#include "crossguard/simulation.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace crossguard {

// Copy of the template with n controlled vehicles queued behind the first controlled vehicle,
// spacing metres apart. Uncontrolled vehicles keep their offset but move back with the queue
// tail, so they meet the last queued vehicles instead of cutting the queue.
ScenarioConfig scale_scenario(const ScenarioConfig& tmpl, std::size_t n_controlled, double spacing = 15.0);

struct BenchOptions {
    // Exact mode is skipped above this many controlled vehicles.
    std::size_t exact_cap = 8;
    // Supervisor steps simulated per repetition.
    std::size_t steps = 50;
    double budget_s = 0.1;
    std::size_t permutation_cap = 100000;
};

struct BenchRow {
    std::size_t n = 0;
    SupervisorMode mode = SupervisorMode::Efficient;
    double median_s = 0.0;
    double max_s = 0.0;
    std::size_t iterations = 0;
    // "ok", "skipped", "budget", "cap" or "infeasible".
    std::string status;
};

std::vector<BenchRow> bench_scaling(const ScenarioConfig& tmpl, std::span<const std::size_t> n_controlled,
                                    std::size_t repetitions, const BenchOptions& opts = {});

void write_bench_table(std::ostream& os, std::span<const BenchRow> rows);

} // namespace crossguard
