#include "crossguard/efficient_scheduler.hpp"

#include "crossguard/bad_set.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace crossguard {

ForbiddenRegionSet::ForbiddenRegionSet(std::span<const OpenInterval> regions)
{
    for (const auto& r : regions)
        insert(r.lo, r.hi);
}

void ForbiddenRegionSet::insert(double lo, double hi)
{
    if (!(lo < hi))
        return;
    // Regions overlapping (lo, hi) as open sets are absorbed; touching ones stay separate.
    auto first = std::lower_bound(regions_.begin(), regions_.end(), lo,
                                  [](const OpenInterval& r, double x) { return r.hi <= x; });
    auto last = first;
    while (last != regions_.end() && last->lo < hi) {
        lo = std::min(lo, last->lo);
        hi = std::max(hi, last->hi);
        ++last;
    }
    first = regions_.erase(first, last);
    regions_.insert(first, OpenInterval{lo, hi});
}

const OpenInterval* ForbiddenRegionSet::containing(double t) const
{
    auto it = std::upper_bound(regions_.begin(), regions_.end(), t,
                               [](double x, const OpenInterval& r) { return x < r.hi; });
    if (it != regions_.end() && it->lo < t && t < it->hi)
        return &*it;
    return nullptr;
}

ForbiddenDeclaration declare_forbidden_regions(const UnitJobSet& jobs, PolynomialStats* stats)
{
    const std::size_t n = jobs.size();
    if (jobs.deadline.size() != n)
        throw std::invalid_argument("UnitJobSet: release/deadline sizes differ");
    ForbiddenDeclaration out;
    out.regions = jobs.initial;
    if (n == 0)
        return out;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return jobs.release[a] < jobs.release[b]; });

    std::vector<double> c(n, 0.0);
    std::vector<char> defined(n, 0);
    std::size_t hi_idx = n;
    while (hi_idx > 0) {
        const double r = jobs.release[order[hi_idx - 1]];
        std::size_t lo_idx = hi_idx - 1;
        while (lo_idx > 0 && jobs.release[order[lo_idx - 1]] == r)
            --lo_idx;
        // Jobs sharing a release time are swept together, then one boundary check follows.
        for (std::size_t g = lo_idx; g < hi_idx; ++g) {
            const double dq = jobs.deadline[order[g]];
            for (std::size_t j = 0; j < n; ++j) {
                if (jobs.deadline[j] < dq)
                    continue;
                if (stats)
                    ++stats->declaration_steps;
                c[j] = defined[j] ? c[j] - 1.0 : jobs.deadline[j];
                defined[j] = 1;
                if (const OpenInterval* f = out.regions.containing(c[j]))
                    c[j] = f->lo;
            }
        }
        double cmin = kInfinity;
        for (std::size_t j = 0; j < n; ++j)
            if (defined[j])
                cmin = std::min(cmin, c[j]);
        if (cmin < r)
            out.feasible = false;
        if (r <= cmin && cmin < r + 1.0)
            out.regions.insert(cmin - 1.0, r);
        hi_idx = lo_idx;
    }
    return out;
}

std::vector<double> edd_generate(const UnitJobSet& jobs, const ForbiddenRegionSet& forbidden,
                                 PolynomialStats* stats)
{
    const std::size_t n = jobs.size();
    std::vector<double> t(n, 0.0);
    std::vector<char> done(n, 0);
    double s = 0.0;
    for (std::size_t placed = 0; placed < n; ++placed) {
        std::size_t pick = n;
        for (;;) {
            pick = n;
            double min_release = kInfinity;
            for (std::size_t j = 0; j < n; ++j) {
                if (done[j])
                    continue;
                if (stats)
                    ++stats->edd_steps;
                min_release = std::min(min_release, jobs.release[j]);
                if (jobs.release[j] > s)
                    continue;
                if (pick == n || jobs.deadline[j] < jobs.deadline[pick] ||
                    (jobs.deadline[j] == jobs.deadline[pick] && jobs.release[j] < jobs.release[pick]))
                    pick = j;
            }
            if (pick == n) {
                s = min_release;
                continue;
            }
            if (const OpenInterval* f = forbidden.containing(s)) {
                s = f->hi;
                continue;
            }
            break;
        }
        t[pick] = s;
        done[pick] = 1;
        s += 1.0;
    }
    return t;
}

PolynomialResult polynomial(const UnitJobSet& jobs, PolynomialStats* stats)
{
    const ForbiddenDeclaration decl = declare_forbidden_regions(jobs, stats);
    std::vector<double> t = edd_generate(jobs, decl.regions, stats);
    PolynomialResult out;
    out.order.resize(jobs.size());
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
    out.yes = decl.feasible;
    if (out.yes)
        out.start = std::move(t);
    return out;
}

RelaxedResult relaxed_exact(const SchedulingInstance& inst, const VerifyOptions& opts)
{
    RelaxedResult out;
    if (entered_conflicts_with_idle(inst))
        return out;
    if (inst.all_entered()) {
        Schedule zero;
        for (const auto& j : inst.jobs)
            zero.entry[j.vehicle] = 0.0;
        zero.feasible = true;
        out.schedule = std::move(zero);
        out.yes = true;
        return out;
    }
    const double theta = theta_max(inst, opts.theta_samples);
    out.theta = theta;
    const double pmax = inst.p_max();

    UnitJobSet unit;
    std::vector<std::size_t> vehicles;
    for (const auto& j : inst.jobs) {
        if (j.entered)
            continue;
        vehicles.push_back(j.vehicle);
        unit.release.push_back(std::max(j.release, pmax) / theta);
        unit.deadline.push_back(j.deadline / theta);
    }
    for (const auto& g : inst.idle_times)
        unit.initial.insert(std::max(g.start / theta - 1.0, 0.0), g.end / theta);

    PolynomialResult poly = polynomial(unit);
    for (std::size_t k : poly.order)
        out.sequence.push_back(vehicles[k]);
    out.yes = poly.yes;
    if (poly.yes) {
        Schedule sched;
        for (const auto& j : inst.jobs)
            if (j.entered)
                sched.entry[j.vehicle] = 0.0;
        for (std::size_t k = 0; k < vehicles.size(); ++k)
            sched.entry[vehicles[k]] = (*poly.start)[k] * theta;
        sched.sequence = out.sequence;
        sched.feasible = true;
        out.schedule = std::move(sched);
    }
    return out;
}

RelaxedResult relaxed_exact(std::span<const VehicleModel> fleet, std::span<const StateInterval> est,
                            const VerifyOptions& opts)
{
    if (bad_set_overlap(params_of(fleet), est))
        return {};
    return relaxed_exact(build_instance(fleet, est, opts.dynamics), opts);
}

Verdict approx_verify(const SchedulingInstance& inst, const VerifyOptions& opts)
{
    if (entered_conflicts_with_idle(inst))
        return {std::nullopt, false};
    if (inst.all_entered())
        return {std::nullopt, true};
    const RelaxedResult rel = relaxed_exact(inst, opts);
    auto [sched, ok] = schedule_for_sequence(rel.sequence, inst);
    if (!ok)
        return {std::nullopt, false};
    return {std::move(sched), true};
}

Verdict approx_verify(std::span<const VehicleModel> fleet, std::span<const StateInterval> est,
                      const VerifyOptions& opts)
{
    if (bad_set_overlap(params_of(fleet), est))
        return {std::nullopt, false};
    return approx_verify(build_instance(fleet, est, opts.dynamics), opts);
}

} // namespace crossguard
