#include "crossguard/exact_scheduler.hpp"

#include "crossguard/bad_set.hpp"
#include "crossguard/errors.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace crossguard {

namespace {

std::vector<IdleTime> sorted_idle(const SchedulingInstance& inst)
{
    std::vector<IdleTime> out;
    for (const auto& g : inst.idle_times)
        if (g.end > g.start)
            out.push_back(g);
    std::stable_sort(out.begin(), out.end(),
                     [](const IdleTime& a, const IdleTime& b) { return a.start < b.start; });
    return out;
}

// One pass over the idle windows in start order. Returns the pushed time.
double push_past_idle(double T, const ControlledJob& job, const std::vector<IdleTime>& idle)
{
    for (const auto& g : idle) {
        if (T >= g.start)
            T = std::max(T, g.end);
        else if (T + job.process_time(T) > g.start)
            T = g.end;
    }
    return T;
}

bool overlaps(double a0, double a1, double b0, double b1, double eps)
{
    if (a1 <= a0 || b1 <= b0)
        return false;
    return !(a1 <= b0 + eps || b1 <= a0 + eps);
}

} // namespace

std::vector<VehicleParams> params_of(std::span<const VehicleModel> fleet)
{
    std::vector<VehicleParams> out;
    out.reserve(fleet.size());
    for (const auto& m : fleet)
        out.push_back(m.params());
    return out;
}

bool entered_conflicts_with_idle(const SchedulingInstance& inst)
{
    for (const auto& j : inst.jobs) {
        if (!j.entered || j.exited)
            continue;
        const double p0 = j.process_time(0.0);
        for (const auto& g : inst.idle_times)
            if (overlaps(0.0, p0, g.start, g.end, 0.0))
                return true;
    }
    return false;
}

std::pair<Schedule, bool> schedule_for_sequence(std::span<const std::size_t> pi0,
                                                const SchedulingInstance& inst,
                                                SchedulingStats* stats)
{
    Schedule sched;
    for (const auto& j : inst.jobs)
        if (j.entered)
            sched.entry[j.vehicle] = 0.0;

    std::vector<const ControlledJob*> order;
    for (std::size_t v : pi0) {
        const ControlledJob* job = inst.job_for(v);
        if (job == nullptr || job->entered)
            continue;
        if (std::find(order.begin(), order.end(), job) != order.end())
            throw std::invalid_argument("schedule_for_sequence: repeated vehicle in sequence");
        order.push_back(job);
    }
    for (const auto& j : inst.jobs)
        if (!j.entered && std::find(order.begin(), order.end(), &j) == order.end())
            throw std::invalid_argument("schedule_for_sequence: sequence misses vehicle " +
                                        std::to_string(j.vehicle));

    bool ok = !entered_conflicts_with_idle(inst);
    const std::vector<IdleTime> idle = sorted_idle(inst);
    const double pmax = inst.p_max();
    double t_prev = 0.0, p_prev = 0.0;
    for (std::size_t k = 0; k < order.size() && ok; ++k) {
        const ControlledJob& job = *order[k];
        double T = k == 0 ? std::max(job.release, pmax) : std::max(job.release, t_prev + p_prev);
        T = push_past_idle(T, job, idle);
        // Further passes never move T (windows are visited by start time and T only grows);
        // they run as a check.
        for (double again = push_past_idle(T, job, idle); again != T;
             again = push_past_idle(T, job, idle)) {
            if (stats)
                ++stats->rescan_changes;
            T = again;
        }
        sched.entry[job.vehicle] = T;
        sched.sequence.push_back(job.vehicle);
        if (T > job.deadline + kScheduleTol) {
            ok = false;
            break;
        }
        t_prev = T;
        p_prev = job.process_time(T);
    }
    sched.feasible = ok;
    return {std::move(sched), ok};
}

Verdict exact_verify(const SchedulingInstance& inst, const VerifyOptions& opts,
                     SchedulingStats* stats)
{
    if (entered_conflicts_with_idle(inst))
        return {std::nullopt, false};
    std::vector<std::size_t> perm;
    for (const auto& j : inst.jobs)
        if (!j.entered)
            perm.push_back(j.vehicle);
    if (perm.empty())
        return {std::nullopt, true};
    std::sort(perm.begin(), perm.end());
    std::size_t count = 0;
    do {
        ++count;
        if (opts.permutation_cap && count > *opts.permutation_cap)
            throw PermutationCapExceeded("exact_verify: more than " +
                                         std::to_string(*opts.permutation_cap) + " sequences");
        if (stats)
            ++stats->permutations;
        auto [sched, ok] = schedule_for_sequence(perm, inst, stats);
        if (ok)
            return {std::move(sched), true};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {std::nullopt, false};
}

Verdict exact_verify(std::span<const VehicleModel> fleet, std::span<const StateInterval> est,
                     const VerifyOptions& opts, SchedulingStats* stats)
{
    const auto params = params_of(fleet);
    if (bad_set_overlap(params, est))
        return {std::nullopt, false};
    const SchedulingInstance inst = build_instance(fleet, est, opts.dynamics);
    return exact_verify(inst, opts, stats);
}

std::string check_schedule(const SchedulingInstance& inst, const Schedule& sched, double eps)
{
    std::ostringstream err;
    struct Occ {
        std::size_t v;
        double a, b;
    };
    std::vector<Occ> occ;
    for (const auto& j : inst.jobs) {
        auto it = sched.entry.find(j.vehicle);
        if (it == sched.entry.end()) {
            err << "vehicle " << j.vehicle << " unscheduled; ";
            continue;
        }
        const double T = it->second;
        if (j.entered) {
            if (T != 0.0)
                err << "entered vehicle " << j.vehicle << " has T=" << T << "; ";
            if (!j.exited)
                occ.push_back({j.vehicle, 0.0, j.process_time(0.0)});
            continue;
        }
        if (T < j.release - kScheduleTol || T > j.deadline + kScheduleTol)
            err << "vehicle " << j.vehicle << " T=" << T << " outside [" << j.release << ", "
                << j.deadline << "]; ";
        occ.push_back({j.vehicle, T, T + j.process_time(T)});
    }
    for (std::size_t a = 0; a < occ.size(); ++a) {
        for (std::size_t b = a + 1; b < occ.size(); ++b)
            if (overlaps(occ[a].a, occ[a].b, occ[b].a, occ[b].b, eps))
                err << "vehicles " << occ[a].v << " and " << occ[b].v << " overlap; ";
        for (const auto& g : inst.idle_times)
            if (overlaps(occ[a].a, occ[a].b, g.start, g.end, eps))
                err << "vehicle " << occ[a].v << " meets idle window of " << g.vehicle << "; ";
    }
    return err.str();
}

} // namespace crossguard
