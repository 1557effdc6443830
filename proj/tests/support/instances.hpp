#pragma once

// Random small verification instances for cross-checks against brute-force oracles.

#include "crossguard/vehicle_dynamics.hpp"

#include <random>
#include <vector>

namespace testing_support {

struct Instance {
    std::vector<crossguard::VehicleParams> fleet;
    std::vector<crossguard::StateInterval> est;
};

inline crossguard::VehicleParams default_vehicle(bool controlled)
{
    crossguard::VehicleParams p;
    p.controlled = controlled;
    if (!controlled) {
        p.input_min = -0.5;
        p.input_max = 0.5;
    }
    return p;
}

inline double uni(std::mt19937_64& rng, double a, double b)
{
    return std::uniform_real_distribution<double>(a, b)(rng);
}

// Vehicles start 2..45 m before the intersection with modest estimate widths; the mix yields
// both feasible and infeasible instances. With entered_prob > 0 a controlled vehicle is placed
// with its upper bound already past alpha.
inline Instance random_instance(std::mt19937_64& rng, std::size_t n_controlled, std::size_t n_uncontrolled,
                                double max_width = 3.0, double entered_prob = 0.0)
{
    Instance inst;
    for (std::size_t i = 0; i < n_controlled + n_uncontrolled; ++i) {
        const bool controlled = i < n_controlled;
        crossguard::VehicleParams p = default_vehicle(controlled);
        const bool entered = controlled && entered_prob > 0.0 && uni(rng, 0.0, 1.0) < entered_prob;
        const double hi_y = entered ? uni(rng, 0.1, 4.0) : uni(rng, -45.0, controlled ? -1.0 : -6.0);
        const double w_y = uni(rng, 0.0, max_width);
        const double hi_v = uni(rng, 4.0, p.v_max);
        const double w_v = uni(rng, 0.0, 0.3);
        crossguard::StateInterval est;
        est.hi = {hi_y, hi_v};
        est.lo = {hi_y - w_y, std::max(p.v_min, hi_v - w_v)};
        inst.fleet.push_back(p);
        inst.est.push_back(est);
    }
    return inst;
}

} // namespace testing_support
