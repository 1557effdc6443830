#pragma once

#include "crossguard/scheduling_params.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <span>
#include <utility>
#include <vector>

namespace crossguard {

struct Schedule {
    // Entry time per controlled vehicle index; 0 for vehicles already past alpha.
    std::map<std::size_t, double> entry;
    // Vehicles with nonzero entry, by increasing entry time.
    std::vector<std::size_t> sequence;
    bool feasible = false;
};

struct Verdict {
    std::optional<Schedule> schedule;
    bool yes = false;
};

struct SchedulingStats {
    std::size_t permutations = 0;
    // Idle-window passes after the first that still moved an entry time.
    std::size_t rescan_changes = 0;
};

struct VerifyOptions {
    DynamicsConfig dynamics;
    std::size_t theta_samples = 64;
    // exact_verify throws PermutationCapExceeded past this many sequences.
    std::optional<std::size_t> permutation_cap;
};

// An entered controlled vehicle occupies (0, P(0)); true if that meets some idle window.
bool entered_conflicts_with_idle(const SchedulingInstance& inst);

// Earliest schedule for the given order. pi0 must list every not-entered controlled vehicle;
// entered ones and unknown-to-M ids are skipped. The schedule is returned even when infeasible.
std::pair<Schedule, bool> schedule_for_sequence(std::span<const std::size_t> pi0,
                                                const SchedulingInstance& inst,
                                                SchedulingStats* stats = nullptr);

// Tries every order of the not-entered vehicles, lexicographically, on a built instance.
Verdict exact_verify(const SchedulingInstance& inst, const VerifyOptions& opts = {},
                     SchedulingStats* stats = nullptr);

Verdict exact_verify(std::span<const VehicleModel> fleet, std::span<const StateInterval> est,
                     const VerifyOptions& opts = {}, SchedulingStats* stats = nullptr);

// Checks a feasible schedule directly: windows, pairwise disjoint occupancy [T, T + P(T)),
// disjointness from idle windows. Returns an empty string when all hold.
std::string check_schedule(const SchedulingInstance& inst, const Schedule& sched, double eps = 1e-9);

std::vector<VehicleParams> params_of(std::span<const VehicleModel> fleet);

} // namespace crossguard
