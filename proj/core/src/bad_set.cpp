#include "crossguard/bad_set.hpp"

#include <stdexcept>
#include <vector>

namespace crossguard {

bool bad_set_overlap(std::span<const VehicleParams> fleet, std::span<const StateInterval> est,
                     std::span<const double> exit_positions)
{
    if (fleet.size() != est.size() || fleet.size() != exit_positions.size())
        throw std::invalid_argument("bad_set_overlap: size mismatch");
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < fleet.size(); ++i)
        if (est[i].hi.y > fleet[i].alpha && est[i].lo.y < exit_positions[i])
            inside.push_back(i);
    for (std::size_t a = 0; a < inside.size(); ++a)
        for (std::size_t b = a + 1; b < inside.size(); ++b)
            if (fleet[inside[a]].controlled || fleet[inside[b]].controlled)
                return true;
    return false;
}

bool bad_set_overlap(std::span<const VehicleParams> fleet, std::span<const StateInterval> est)
{
    std::vector<double> betas;
    betas.reserve(fleet.size());
    for (const auto& p : fleet)
        betas.push_back(p.beta);
    return bad_set_overlap(fleet, est, betas);
}

} // namespace crossguard
