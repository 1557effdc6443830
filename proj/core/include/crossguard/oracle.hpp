#pragma once

#include "crossguard/vehicle_dynamics.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace crossguard {

enum class BadSetKind { Nominal, Inflated };

struct OracleConfig {
    // Switch times per controlled vehicle, evenly spread over the latest useful switch; pure
    // braking is always added.
    std::size_t switch_points = 32;
    double step = 0.01;
    BadSetKind bad_set = BadSetKind::Nominal;
    // Inflated exit position alpha + theta * v_max for controlled vehicles.
    double theta = 0.0;
    std::size_t max_controlled = 4;
};

// Searches bang-bang signals (u_min, then u_max) for a combination keeping every pairwise
// occupancy interval disjoint. Throws OracleTooLarge above max_controlled controlled vehicles.
bool brute_force_safe_input_oracle(std::span<const VehicleParams> fleet,
                                   std::span<const StateInterval> est, const OracleConfig& cfg = {});

} // namespace crossguard
