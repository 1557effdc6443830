#include "crossguard/scheduling_params.hpp"

#include "crossguard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crossguard {

namespace {

// Launch profiles are sampled up to this distance past the start (m).
constexpr double kLaunchReach = 1000.0;

double must(std::optional<double> t, const char* what)
{
    if (!t)
        throw IntegrationDiverged(std::string("crossing not reached within the horizon cap: ") + what);
    return *t;
}

} // namespace

VehicleModel::VehicleModel(const VehicleParams& params, double step) : params_(params), step_(step)
{
    params_.validate();
    if (params_.controlled) {
        const VehicleState start{0.0, params_.v_min};
        launch_lo_ = std::make_shared<MotionProfile>(params_, start, params_.input_max,
                                                     extreme_disturbance(params_, Extreme::Min),
                                                     step, kLaunchReach);
        launch_hi_ = std::make_shared<MotionProfile>(params_, start, params_.input_max,
                                                     extreme_disturbance(params_, Extreme::Max),
                                                     step, kLaunchReach);
    }
}

std::vector<VehicleModel> make_models(std::span<const VehicleParams> fleet, double step)
{
    std::vector<VehicleModel> out;
    out.reserve(fleet.size());
    for (const auto& p : fleet)
        out.emplace_back(p, step);
    return out;
}

ProcessTimeModel::ProcessTimeModel(const VehicleModel& model, const StateInterval& est,
                                   const DynamicsConfig& cfg)
    : model_(&model), est_(est), cfg_(cfg)
{
    const VehicleParams& p = model.params();
    if (!p.controlled)
        throw std::invalid_argument("ProcessTimeModel needs a controlled vehicle");
    if (!est.valid())
        throw std::invalid_argument("ProcessTimeModel: invalid estimate");
    entered_ = est.hi.y >= p.alpha;
    exited_ = est.lo.y >= p.beta;
    if (!exited_)
        brake_lo_ = std::make_shared<MotionProfile>(p, est.lo, p.input_min,
                                                    extreme_disturbance(p, Extreme::Min),
                                                    cfg.step, p.beta);
    if (!entered_) {
        brake_hi_ = std::make_shared<MotionProfile>(p, est.hi, p.input_min,
                                                    extreme_disturbance(p, Extreme::Max),
                                                    cfg.step, p.alpha);
        deadline_ = must(brake_hi_->time_to_reach(p.alpha), "deadline");
        release_ = entry_for_switch(0.0);
    }
}

double ProcessTimeModel::entry_for_switch(double s) const
{
    if (entered_)
        return 0.0;
    if (s >= deadline_)
        return deadline_;
    const VehicleParams& p = model_->params();
    const VehicleState at = brake_hi_->state_at(s);
    if (at.y >= p.alpha)
        return deadline_;
    if (at.v == p.v_min)
        return s + must(model_->launch(Extreme::Max).time_to_reach(p.alpha - at.y), "entry");
    return s + must(crossing_time(p, at, InputSignal(p.input_max), Extreme::Max, p.alpha, cfg_.step),
                    "entry");
}

double ProcessTimeModel::exit_for_switch(double s) const
{
    if (exited_)
        return 0.0;
    const VehicleParams& p = model_->params();
    const VehicleState at = brake_lo_->state_at(s);
    if (at.y >= p.beta)
        return must(brake_lo_->time_to_reach(p.beta), "exit");
    if (at.v == p.v_min)
        return s + must(model_->launch(Extreme::Min).time_to_reach(p.beta - at.y), "exit");
    return s + must(crossing_time(p, at, InputSignal(p.input_max), Extreme::Min, p.beta, cfg_.step),
                    "exit");
}

const ProcessTimeModel::Solved& ProcessTimeModel::solve(double T) const
{
    if (auto it = memo_.find(T); it != memo_.end())
        return it->second;

    double s = 0.0;
    if (entered_) {
        s = 0.0;
    } else if (T <= release_) {
        s = 0.0;
    } else if (T >= deadline_) {
        s = deadline_;
    } else {
        // Bracketed false position with the Illinois modification; entry(s) is nondecreasing.
        double a = 0.0, fa = release_ - T;
        double b = deadline_, fb = deadline_ - T;
        int side = 0;
        s = b;
        for (int it = 0; it < cfg_.max_iterations; ++it) {
            ++solver_iterations_;
            double x = b - fb * (b - a) / (fb - fa);
            if (!(x > a && x < b))
                x = 0.5 * (a + b);
            const double f = entry_for_switch(x) - T;
            if (f >= 0.0 && f <= cfg_.entry_tol) {
                b = x;
                break;
            }
            if (f >= 0.0) {
                b = x;
                fb = f;
                if (side == 1)
                    fa *= 0.5;
                side = 1;
            } else {
                a = x;
                fa = f;
                if (side == -1)
                    fb *= 0.5;
                side = -1;
            }
            if (b - a <= 1e-13 * std::max(1.0, b))
                break;
        }
        s = b;
    }

    double proc = 0.0;
    if (exited_)
        proc = 0.0;
    else if (entered_)
        proc = exit_for_switch(0.0);
    else
        proc = std::max(0.0, exit_for_switch(s) - T);
    return memo_.emplace(T, Solved{s, proc}).first->second;
}

double ProcessTimeModel::switch_time(double T) const
{
    if (entered_)
        return 0.0;
    return solve(std::clamp(T, release_, deadline_)).s;
}

double ProcessTimeModel::process_time(double T) const
{
    if (exited_)
        return 0.0;
    if (entered_)
        return solve(0.0).p;
    if (T < release_ - kScheduleTol || T > deadline_ + kScheduleTol)
        return kInfinity;
    return solve(std::clamp(T, release_, deadline_)).p;
}

InputSignal ProcessTimeModel::signal_for_entry(double T) const
{
    const VehicleParams& p = model_->params();
    if (entered_)
        return InputSignal::bang_bang(p.input_min, 0.0, p.input_max);
    return InputSignal::bang_bang(p.input_min, switch_time(T), p.input_max);
}

const ControlledJob* SchedulingInstance::job_for(std::size_t vehicle) const
{
    for (const auto& j : jobs)
        if (j.vehicle == vehicle)
            return &j;
    return nullptr;
}

double SchedulingInstance::p_max() const
{
    double out = 0.0;
    for (const auto& j : jobs)
        if (j.entered)
            out = std::max(out, j.process_time(0.0));
    return out;
}

bool SchedulingInstance::all_entered() const
{
    return std::all_of(jobs.begin(), jobs.end(), [](const ControlledJob& j) { return j.entered; });
}

double release_time(const VehicleParams& p, const StateInterval& est, const DynamicsConfig& cfg)
{
    VehicleModel m(p, cfg.step);
    return ProcessTimeModel(m, est, cfg).release();
}

double deadline(const VehicleParams& p, const StateInterval& est, const DynamicsConfig& cfg)
{
    VehicleModel m(p, cfg.step);
    return ProcessTimeModel(m, est, cfg).deadline();
}

double process_time(const VehicleParams& p, const StateInterval& est, double T,
                    const DynamicsConfig& cfg)
{
    VehicleModel m(p, cfg.step);
    return ProcessTimeModel(m, est, cfg).process_time(T);
}

std::pair<double, double> idle_time(const VehicleParams& p, const StateInterval& est,
                                    const DynamicsConfig& cfg)
{
    if (est.lo.y >= p.beta)
        return {0.0, 0.0};
    const double pbar = must(crossing_time(p, est.lo, InputSignal(p.input_min), Extreme::Min,
                                           p.beta, cfg.step),
                             "idle end");
    const double rbar = est.hi.y >= p.alpha
                            ? 0.0
                            : must(crossing_time(p, est.hi, InputSignal(p.input_max), Extreme::Max,
                                                 p.alpha, cfg.step),
                                   "idle start");
    return {rbar, pbar};
}

SchedulingInstance build_instance(std::span<const VehicleModel> fleet,
                                  std::span<const StateInterval> est, const DynamicsConfig& cfg)
{
    if (fleet.size() != est.size())
        throw std::invalid_argument("build_instance: fleet and estimate sizes differ");
    SchedulingInstance inst;
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        const VehicleParams& p = fleet[i].params();
        if (p.controlled) {
            auto model = std::make_shared<const ProcessTimeModel>(fleet[i], est[i], cfg);
            ControlledJob job;
            job.vehicle = i;
            job.release = model->release();
            job.deadline = model->deadline();
            job.entered = model->entered();
            job.exited = model->exited();
            job.process_time = [model](double T) { return model->process_time(T); };
            inst.jobs.push_back(std::move(job));
            inst.models.push_back(std::move(model));
        } else {
            const auto [rbar, pbar] = idle_time(p, est[i], cfg);
            inst.idle_times.push_back({i, rbar, pbar});
        }
    }
    return inst;
}

double theta_max(const SchedulingInstance& inst, std::size_t sample_count)
{
    double out = 0.0;
    for (const auto& j : inst.jobs) {
        if (j.exited)
            continue;
        if (j.entered || sample_count < 2 || j.deadline <= j.release) {
            out = std::max(out, j.process_time(j.entered ? 0.0 : j.release));
            continue;
        }
        for (std::size_t i = 0; i < sample_count; ++i) {
            const double T = i + 1 == sample_count
                                 ? j.deadline
                                 : j.release + (j.deadline - j.release) * static_cast<double>(i) /
                                                   static_cast<double>(sample_count - 1);
            out = std::max(out, j.process_time(T));
        }
    }
    return out * (1.0 + 1e-6);
}

} // namespace crossguard
