#pragma once

// Hand-built scheduling instances with closed-form process times.

#include "crossguard/scheduling_params.hpp"

#include <functional>

namespace testing_support {

inline crossguard::ControlledJob job(std::size_t vehicle, double release, double deadline,
                                     std::function<double(double)> p, bool entered = false)
{
    crossguard::ControlledJob j;
    j.vehicle = vehicle;
    j.release = release;
    j.deadline = deadline;
    j.entered = entered;
    j.process_time = std::move(p);
    return j;
}

inline std::function<double(double)> constant_p(double c)
{
    return [c](double) { return c; };
}

} // namespace testing_support
