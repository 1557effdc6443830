#pragma once

#include "crossguard/vehicle_dynamics.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace crossguard {

struct VehicleSpec {
    int id = 0;
    VehicleParams params;
    VehicleState initial;
    NoiseBounds noise;
    // Constant desired input for controlled vehicles.
    double desired = 1.0;
};

struct ScenarioConfig {
    double tau = 0.1;
    std::size_t steps = 600;
    std::uint64_t seed = 1;
    std::vector<VehicleSpec> vehicles;

    // Throws ScenarioError.
    void validate() const;
    std::vector<VehicleParams> fleet() const;
};

// Line format:
//   tau=<float>  steps=<int>  seed=<uint64>  [drag=<float>]   (header lines, any order)
//   vehicle,<id>,<controlled>,<y0>,<v0>,<alpha>,<beta>,<v_min>,<v_max>,<in_min>,<in_max>,
//           <d_y_min>,<d_y_max>,<d_v_min>,<d_v_max>,<dy_noise_min>,<dy_noise_max>,
//           <dv_noise_min>,<dv_noise_max>,<u_desire or ->
// '#' starts a comment. drag applies to vehicles listed after it.
ScenarioConfig parse_scenario(std::istream& in, const std::string& origin = "<stream>");
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string format_scenario(const ScenarioConfig& cfg);

} // namespace crossguard
