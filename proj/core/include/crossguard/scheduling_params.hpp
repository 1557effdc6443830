#pragma once

#include "crossguard/vehicle_dynamics.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace crossguard {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Slack used when comparing scheduled times against deadlines and idle windows.
inline constexpr double kScheduleTol = 1e-6;

struct DynamicsConfig {
    double step = 0.01;
    // Switch-time search stops once the hi entry lands in [T, T + entry_tol].
    double entry_tol = 1e-9;
    int max_iterations = 80;
};

// A vehicle's parameters plus full-throttle launch profiles from (0, v_min), shared by every
// estimate of that vehicle.
class VehicleModel {
public:
    VehicleModel(const VehicleParams& params, double step);

    const VehicleParams& params() const { return params_; }
    double step() const { return step_; }
    const MotionProfile& launch(Extreme e) const { return e == Extreme::Min ? *launch_lo_ : *launch_hi_; }

private:
    VehicleParams params_;
    double step_;
    std::shared_ptr<const MotionProfile> launch_lo_;
    std::shared_ptr<const MotionProfile> launch_hi_;
};

std::vector<VehicleModel> make_models(std::span<const VehicleParams> fleet, double step);

// Entry/exit timing of one controlled vehicle under the signals u_min on [0, s), u_max after.
// The hi state (max disturbance) governs entry at alpha, the lo state (min disturbance) exit at beta.
class ProcessTimeModel {
public:
    ProcessTimeModel(const VehicleModel& model, const StateInterval& est,
                     const DynamicsConfig& cfg = {});

    bool entered() const { return entered_; }
    bool exited() const { return exited_; }
    double release() const { return release_; }
    double deadline() const { return deadline_; }

    // Time hi reaches alpha when switching to u_max at s.
    double entry_for_switch(double s) const;
    // Time lo reaches beta when switching to u_max at s.
    double exit_for_switch(double s) const;
    // Switch time whose entry lands in [T, T + entry_tol]; T is clamped to [R, D].
    double switch_time(double T) const;
    // Exit minus T for the switch realizing entry T; infinity outside [R, D].
    double process_time(double T) const;
    // The signal realizing entry T (constant u_max once entered).
    InputSignal signal_for_entry(double T) const;

    // Root-finding iterations spent so far (diagnostic).
    std::size_t solver_iterations() const { return solver_iterations_; }

private:
    struct Solved {
        double s;
        double p;
    };
    const Solved& solve(double T) const;

    const VehicleModel* model_;
    StateInterval est_;
    DynamicsConfig cfg_;
    bool entered_ = false;
    bool exited_ = false;
    double release_ = 0.0;
    double deadline_ = 0.0;
    std::shared_ptr<const MotionProfile> brake_hi_;
    std::shared_ptr<const MotionProfile> brake_lo_;
    mutable std::map<double, Solved> memo_;
    mutable std::size_t solver_iterations_ = 0;
};

struct ControlledJob {
    std::size_t vehicle = 0;
    double release = 0.0;
    double deadline = 0.0;
    bool entered = false;
    bool exited = false;
    std::function<double(double)> process_time;
};

struct IdleTime {
    std::size_t vehicle = 0;
    double start = 0.0;
    double end = 0.0;
};

// Jobs are ordered by vehicle index. models[i] backs jobs[i] when the instance comes from
// vehicle estimates; synthetic instances leave it empty.
struct SchedulingInstance {
    std::vector<ControlledJob> jobs;
    std::vector<IdleTime> idle_times;
    std::vector<std::shared_ptr<const ProcessTimeModel>> models;

    const ControlledJob* job_for(std::size_t vehicle) const;
    // Largest P(0) over already-entered vehicles; 0 if there are none.
    double p_max() const;
    bool all_entered() const;
};

double release_time(const VehicleParams& p, const StateInterval& est, const DynamicsConfig& cfg = {});
double deadline(const VehicleParams& p, const StateInterval& est, const DynamicsConfig& cfg = {});
double process_time(const VehicleParams& p, const StateInterval& est, double T,
                    const DynamicsConfig& cfg = {});
// (R_bar, P_bar) of an uncontrolled vehicle.
std::pair<double, double> idle_time(const VehicleParams& p, const StateInterval& est,
                                    const DynamicsConfig& cfg = {});

SchedulingInstance build_instance(std::span<const VehicleModel> fleet,
                                  std::span<const StateInterval> est,
                                  const DynamicsConfig& cfg = {});

// Max of P_j(T) over a uniform grid of sample_count points on [R_j, D_j] per not-entered job,
// and P_j(0) for entered ones, times (1 + 1e-6).
double theta_max(const SchedulingInstance& inst, std::size_t sample_count = 64);

} // namespace crossguard
