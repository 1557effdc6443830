#include "crossguard/supervisor.hpp"

#include "crossguard/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace crossguard {

namespace {

constexpr double kGridEps = 1e-9;

VehicleState state_at(const Trajectory& tr, double t)
{
    auto it = std::lower_bound(tr.begin(), tr.end(), t,
                               [](const TrajectorySample& s, double x) { return s.t < x - kGridEps; });
    if (it == tr.end())
        return tr.back().state;
    if (std::abs(it->t - t) <= kGridEps || it == tr.begin())
        return it->state;
    const auto& a = *std::prev(it);
    const double w = (t - a.t) / (it->t - a.t);
    return {a.state.y + w * (it->state.y - a.state.y), a.state.v + w * (it->state.v - a.state.v)};
}

Schedule zero_schedule(const SchedulingInstance& inst)
{
    Schedule s;
    for (const auto& j : inst.jobs)
        s.entry[j.vehicle] = 0.0;
    s.feasible = true;
    return s;
}

Verdict run_verifier(SupervisorMode mode, const SchedulingInstance& inst, const VerifyOptions& opts)
{
    return mode == SupervisorMode::Exact ? exact_verify(inst, opts) : approx_verify(inst, opts);
}

} // namespace

VerifyOptions SupervisorConfig::verify_options() const
{
    VerifyOptions o;
    o.dynamics.step = step();
    o.theta_samples = theta_samples;
    o.permutation_cap = permutation_cap;
    return o;
}

SupervisorSession::SupervisorSession(SupervisorMode mode, std::vector<VehicleParams> fleet,
                                     const SupervisorConfig& cfg)
    : mode_(mode), cfg_(cfg), params_(std::move(fleet))
{
    if (!(cfg_.tau > 0.0) || cfg_.substeps == 0)
        throw std::invalid_argument("SupervisorConfig: tau and substeps must be positive");
    if (std::none_of(params_.begin(), params_.end(), [](const VehicleParams& p) { return p.controlled; }))
        throw std::invalid_argument("SupervisorSession: no controlled vehicle");
    models_ = make_models(params_, cfg_.step());
}

std::vector<StateInterval> predict_all(std::span<const VehicleParams> fleet,
                                       std::span<const StateInterval> est,
                                       std::span<const InputSignal> inputs, double tau, double step)
{
    if (fleet.size() != est.size() || fleet.size() != inputs.size())
        throw std::invalid_argument("predict_all: size mismatch");
    std::vector<StateInterval> out;
    out.reserve(fleet.size());
    for (std::size_t i = 0; i < fleet.size(); ++i)
        out.push_back(predict_step(fleet[i], est[i], inputs[i], tau, step));
    return out;
}

bool desired_safe_over_step(std::span<const VehicleParams> fleet, std::span<const StateInterval> est,
                            std::span<const InputSignal> inputs, double tau, double step)
{
    if (!(tau > 0.0))
        return true;
    const std::size_t n = fleet.size();
    if (est.size() != n || inputs.size() != n)
        throw std::invalid_argument("desired_safe_over_step: size mismatch");
    std::vector<Trajectory> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const VehicleParams& p = fleet[i];
        const InputSignal lo_sig = p.controlled ? inputs[i] : InputSignal(p.input_min);
        const InputSignal hi_sig = p.controlled ? inputs[i] : InputSignal(p.input_max);
        lo[i] = integrate_extremal(p, est[i].lo, lo_sig, Extreme::Min, tau, step);
        hi[i] = integrate_extremal(p, est[i].hi, hi_sig, Extreme::Max, tau, step);
    }
    std::vector<StateInterval> at(n);
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * step;
        if (t >= tau - kGridEps)
            break;
        for (std::size_t i = 0; i < n; ++i)
            at[i] = {state_at(lo[i], t), state_at(hi[i], t)};
        if (bad_set_overlap(fleet, at))
            return false;
    }
    return true;
}

std::vector<InputSignal> safe_input_generator(std::span<const VehicleModel> fleet,
                                              const SchedulingInstance& inst, const Schedule& sched)
{
    std::vector<InputSignal> out;
    out.reserve(fleet.size());
    for (const auto& m : fleet)
        out.push_back(InputSignal(m.params().controlled ? m.params().input_max : 0.0));
    for (std::size_t k = 0; k < inst.jobs.size(); ++k) {
        const ControlledJob& job = inst.jobs[k];
        const auto it = sched.entry.find(job.vehicle);
        const double T = it == sched.entry.end() ? 0.0 : it->second;
        const VehicleParams& p = fleet[job.vehicle].params();
        if (job.entered || T == 0.0) {
            out[job.vehicle] = InputSignal::bang_bang(p.input_min, 0.0, p.input_max);
            continue;
        }
        if (T < job.release - kScheduleTol || T > job.deadline + kScheduleTol)
            throw ContractViolation("safe_input_generator: entry time " + std::to_string(T) +
                                    " not attainable for vehicle " + std::to_string(job.vehicle));
        if (k >= inst.models.size() || !inst.models[k])
            throw ContractViolation("safe_input_generator: instance carries no vehicle models");
        out[job.vehicle] = inst.models[k]->signal_for_entry(T);
    }
    return out;
}

std::vector<InputSignal> safe_input_generator(std::span<const VehicleModel> fleet,
                                              std::span<const StateInterval> prediction,
                                              const Schedule& sched, const DynamicsConfig& dyn)
{
    return safe_input_generator(fleet, build_instance(fleet, prediction, dyn), sched);
}

StepDecision SupervisorSession::decide(std::span<const StateInterval> est,
                                       std::span<const InputSignal> desired, bool initial)
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = params_.size();
    if (est.size() != n || desired.size() != n)
        throw std::invalid_argument("supervisor_step: size mismatch");
    const double step = cfg_.step();
    const VerifyOptions opts = cfg_.verify_options();

    StepDecision d;
    const auto pred_desired = predict_all(params_, est, desired, cfg_.tau, step);
    std::optional<SchedulingInstance> inst;
    if (!bad_set_overlap(params_, pred_desired)) {
        inst = build_instance(models_, pred_desired, opts.dynamics);
        const Verdict v = run_verifier(mode_, *inst, opts);
        d.verifier_yes = v.yes;
        if (v.yes)
            d.schedule_used = v.schedule ? *v.schedule : zero_schedule(*inst);
    }
    d.within_step_safe = desired_safe_over_step(params_, est, desired, cfg_.tau, step);

    if (d.verifier_yes && d.within_step_safe) {
        d.output.assign(desired.begin(), desired.end());
        stored_safe_ = safe_input_generator(models_, *inst, d.schedule_used);
        stored_sequence_ = d.schedule_used.sequence;
        last_prediction_ = pred_desired;
    } else {
        if (initial)
            throw InfeasibleInitialCondition(d.verifier_yes
                                                 ? "desired inputs enter the Bad set within the first step"
                                                 : "no safe schedule exists for the initial estimate");
        d.overridden = true;
        d.output = stored_safe_;
        const auto pred_safe = predict_all(params_, est, stored_safe_, cfg_.tau, step);
        if (bad_set_overlap(params_, pred_safe))
            throw BlockedState("stored safe signal leads into the Bad set at step " +
                               std::to_string(step_index_));
        const SchedulingInstance safe_inst = build_instance(models_, pred_safe, opts.dynamics);
        Verdict v2 = run_verifier(mode_, safe_inst, opts);
        if (v2.yes) {
            d.schedule_used = v2.schedule ? *v2.schedule : zero_schedule(safe_inst);
        } else if (mode_ == SupervisorMode::Efficient) {
            // Replay the previous sequence. Vehicles that dropped back out of the entered set
            // after correction go first, where their zero entry time had put them.
            std::vector<std::size_t> pi;
            for (const auto& j : safe_inst.jobs)
                if (!j.entered && std::find(stored_sequence_.begin(), stored_sequence_.end(),
                                            j.vehicle) == stored_sequence_.end())
                    pi.push_back(j.vehicle);
            pi.insert(pi.end(), stored_sequence_.begin(), stored_sequence_.end());
            auto [sched, ok] = schedule_for_sequence(pi, safe_inst);
            if (!ok)
                throw BlockedState("previous sequence infeasible at step " + std::to_string(step_index_));
            d.schedule_used = std::move(sched);
            d.fallback_used = true;
        } else {
            throw BlockedState("no safe schedule for the stored signal at step " +
                               std::to_string(step_index_));
        }
        stored_safe_ = safe_input_generator(models_, safe_inst, d.schedule_used);
        stored_sequence_ = d.schedule_used.sequence;
        last_prediction_ = pred_safe;
    }
    ++step_index_;
    initialized_ = true;
    d.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return d;
}

std::pair<SupervisorSession, StepDecision> initialize_session(SupervisorMode mode,
                                                              std::vector<VehicleParams> fleet,
                                                              std::span<const StateInterval> est,
                                                              std::span<const InputSignal> desired,
                                                              const SupervisorConfig& cfg)
{
    SupervisorSession session(mode, std::move(fleet), cfg);
    StepDecision d = session.decide(est, desired, true);
    return {std::move(session), std::move(d)};
}

StepDecision supervisor_step(SupervisorSession& session, std::span<const StateInterval> est,
                             std::span<const InputSignal> desired)
{
    if (!session.initialized_)
        throw std::logic_error("supervisor_step before initialize_session");
    return session.decide(est, desired, false);
}

} // namespace crossguard
