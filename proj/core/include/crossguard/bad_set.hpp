#pragma once

#include "crossguard/vehicle_dynamics.hpp"

#include <span>

namespace crossguard {

// True iff two vehicles, at least one controlled, both have position intervals [lo.y, hi.y]
// meeting their own open interval (alpha, beta).
bool bad_set_overlap(std::span<const VehicleParams> fleet, std::span<const StateInterval> est);

// Same test with per-vehicle exit positions replacing beta (inflated intersections).
bool bad_set_overlap(std::span<const VehicleParams> fleet, std::span<const StateInterval> est,
                     std::span<const double> exit_positions);

} // namespace crossguard
