#pragma once

#include "crossguard/bad_set.hpp"
#include "crossguard/efficient_scheduler.hpp"
#include "crossguard/exact_scheduler.hpp"
#include "crossguard/scheduling_params.hpp"
#include "crossguard/vehicle_dynamics.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace crossguard {

enum class SupervisorMode { Exact, Efficient };

struct SupervisorConfig {
    double tau = 0.1;
    // Integration step is tau / substeps.
    std::size_t substeps = 10;
    std::size_t theta_samples = 64;
    std::optional<std::size_t> permutation_cap;

    double step() const { return tau / static_cast<double>(substeps); }
    VerifyOptions verify_options() const;
};

struct StepDecision {
    // One signal per vehicle; entries for uncontrolled vehicles are unused placeholders.
    std::vector<InputSignal> output;
    bool overridden = false;
    Schedule schedule_used;
    // Verifier answer on the desired-input prediction.
    bool verifier_yes = false;
    bool within_step_safe = true;
    // Efficient mode only: the stored sequence had to be replayed.
    bool fallback_used = false;
    double wall_s = 0.0;
};

class SupervisorSession {
public:
    SupervisorSession(SupervisorMode mode, std::vector<VehicleParams> fleet, const SupervisorConfig& cfg);

    SupervisorMode mode() const { return mode_; }
    const SupervisorConfig& config() const { return cfg_; }
    std::span<const VehicleModel> fleet() const { return models_; }
    const std::vector<VehicleParams>& params() const { return params_; }
    const std::vector<InputSignal>& stored_safe_signal() const { return stored_safe_; }
    const std::vector<std::size_t>& stored_sequence() const { return stored_sequence_; }
    const std::vector<StateInterval>& last_prediction() const { return last_prediction_; }
    std::size_t step_index() const { return step_index_; }

private:
    friend StepDecision supervisor_step(SupervisorSession&, std::span<const StateInterval>,
                                        std::span<const InputSignal>);
    friend std::pair<SupervisorSession, StepDecision>
    initialize_session(SupervisorMode, std::vector<VehicleParams>, std::span<const StateInterval>,
                       std::span<const InputSignal>, const SupervisorConfig&);

    StepDecision decide(std::span<const StateInterval> est, std::span<const InputSignal> desired,
                        bool initial);

    SupervisorMode mode_;
    SupervisorConfig cfg_;
    std::vector<VehicleParams> params_;
    std::vector<VehicleModel> models_;
    std::vector<InputSignal> stored_safe_;
    std::vector<std::size_t> stored_sequence_;
    std::vector<StateInterval> last_prediction_;
    std::size_t step_index_ = 0;
    bool initialized_ = false;
};

// Per-vehicle one-step prediction; uncontrolled vehicles use extremal driver inputs.
std::vector<StateInterval> predict_all(std::span<const VehicleParams> fleet,
                                       std::span<const StateInterval> est,
                                       std::span<const InputSignal> inputs, double tau, double step);

// Samples the propagated intervals on the integration grid over [0, tau) and checks the Bad set.
bool desired_safe_over_step(std::span<const VehicleParams> fleet, std::span<const StateInterval> est,
                            std::span<const InputSignal> inputs, double tau, double step);

// Signals realizing a feasible schedule on a built instance: bang-bang for T_j > 0, constant
// u_max for T_j = 0 or for vehicles missing from the schedule.
std::vector<InputSignal> safe_input_generator(std::span<const VehicleModel> fleet,
                                              const SchedulingInstance& inst, const Schedule& sched);

std::vector<InputSignal> safe_input_generator(std::span<const VehicleModel> fleet,
                                              std::span<const StateInterval> prediction,
                                              const Schedule& sched, const DynamicsConfig& dyn = {});

// Runs step 0. Throws InfeasibleInitialCondition when the desired inputs cannot be certified.
std::pair<SupervisorSession, StepDecision> initialize_session(SupervisorMode mode,
                                                              std::vector<VehicleParams> fleet,
                                                              std::span<const StateInterval> est,
                                                              std::span<const InputSignal> desired,
                                                              const SupervisorConfig& cfg = {});

// Throws BlockedState when no safe signal can be stored for the next step.
StepDecision supervisor_step(SupervisorSession& session, std::span<const StateInterval> est,
                             std::span<const InputSignal> desired);

} // namespace crossguard
