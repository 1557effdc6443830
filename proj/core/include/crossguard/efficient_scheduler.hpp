#pragma once

#include "crossguard/exact_scheduler.hpp"
#include "crossguard/scheduling_params.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace crossguard {

struct OpenInterval {
    double lo;
    double hi;
};

// Sorted, pairwise disjoint open intervals; inserting merges overlaps.
class ForbiddenRegionSet {
public:
    ForbiddenRegionSet() = default;
    explicit ForbiddenRegionSet(std::span<const OpenInterval> regions);

    // Empty intervals (lo >= hi) are ignored.
    void insert(double lo, double hi);
    // Region with lo < t < hi, or nullptr.
    const OpenInterval* containing(double t) const;
    const std::vector<OpenInterval>& regions() const { return regions_; }
    bool empty() const { return regions_.empty(); }

private:
    std::vector<OpenInterval> regions_;
};

// Unit-length jobs with real release times and latest start times. Job i is identified by i.
struct UnitJobSet {
    std::vector<double> release;
    std::vector<double> deadline;
    ForbiddenRegionSet initial;

    std::size_t size() const { return release.size(); }
};

struct PolynomialStats {
    std::size_t declaration_steps = 0;
    std::size_t edd_steps = 0;
};

struct ForbiddenDeclaration {
    ForbiddenRegionSet regions;
    bool feasible = true;
};

ForbiddenDeclaration declare_forbidden_regions(const UnitJobSet& jobs, PolynomialStats* stats = nullptr);

// Start time per job (indexed like jobs).
std::vector<double> edd_generate(const UnitJobSet& jobs, const ForbiddenRegionSet& forbidden,
                                 PolynomialStats* stats = nullptr);

struct PolynomialResult {
    std::optional<std::vector<double>> start;
    // Job indices by increasing start time.
    std::vector<std::size_t> order;
    bool yes = false;
};

PolynomialResult polynomial(const UnitJobSet& jobs, PolynomialStats* stats = nullptr);

struct RelaxedResult {
    // Denormalized entry times (entered vehicles at 0).
    std::optional<Schedule> schedule;
    // Not-entered vehicles in relaxed start order; empty when not computed.
    std::vector<std::size_t> sequence;
    bool yes = false;
    double theta = 0.0;
};

RelaxedResult relaxed_exact(const SchedulingInstance& inst, const VerifyOptions& opts = {});
RelaxedResult relaxed_exact(std::span<const VehicleModel> fleet, std::span<const StateInterval> est,
                            const VerifyOptions& opts = {});

Verdict approx_verify(const SchedulingInstance& inst, const VerifyOptions& opts = {});
Verdict approx_verify(std::span<const VehicleModel> fleet, std::span<const StateInterval> est,
                      const VerifyOptions& opts = {});

} // namespace crossguard
