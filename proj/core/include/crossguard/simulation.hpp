#pragma once

#include "crossguard/scenario.hpp"
#include "crossguard/supervisor.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace crossguard {

struct TraceRecord {
    std::size_t step = 0;
    int vehicle = 0;
    VehicleState truth;
    VehicleState measured;
    StateInterval estimate;
    double input = 0.0;
    bool overridden = false;
    bool answer = false;
    double wall_s = 0.0;
};

struct RunMetrics {
    // Steps during which some sampled instant had two vehicles (one controlled) inside their
    // intersections, judged on true states.
    std::size_t collisions = 0;
    std::size_t overrides = 0;
    std::size_t blocked = 0;
    std::size_t incompatible_measurements = 0;
    double max_iter_s = 0.0;
    double mean_iter_s = 0.0;
    bool completed = false;
    std::size_t steps_run = 0;
    std::size_t fallbacks = 0;
    // Trace records whose estimate failed to bracket the true state.
    std::size_t containment_violations = 0;
};

struct SimulationOptions {
    std::size_t substeps = 10;
    std::size_t theta_samples = 64;
    std::optional<std::size_t> permutation_cap;
    // Off: wall times are written as 0 so traces are reproducible byte for byte.
    bool record_wall_time = true;
    // Abort the run once a single supervisor iteration exceeds this many seconds.
    std::optional<double> iteration_budget_s;
};

struct SimulationResult {
    std::vector<TraceRecord> trace;
    RunMetrics metrics;
    // Per-step supervisor wall times (always measured, independent of record_wall_time).
    std::vector<double> iteration_s;
    bool budget_exceeded = false;
};

SimulationResult run_simulation(const ScenarioConfig& cfg, SupervisorMode mode,
                                const SimulationOptions& opts = {});

// Initial estimate: measurement band, with speed clipped to the speed bounds.
StateInterval initial_estimate(const VehicleSpec& v, const VehicleState& meas);

void write_trace(std::ostream& os, std::span<const TraceRecord> trace);
void write_metrics(std::ostream& os, const RunMetrics& m);
// Throws std::runtime_error naming the path on I/O failure.
void emit_outputs(std::span<const TraceRecord> trace, const RunMetrics& m,
                  const std::filesystem::path& trace_path, const std::filesystem::path& metrics_path);

inline constexpr const char* kTraceHeader =
    "step,vehicle,y_true,v_true,y_meas,v_meas,y_lo,y_hi,v_lo,v_hi,input,overridden,answer,wall_s";

// Deterministic per-vehicle random stream derived from (seed, vehicle id).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t vehicle);

} // namespace crossguard
