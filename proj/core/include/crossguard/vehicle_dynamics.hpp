#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace crossguard {

// Longitudinal model: y' = v + d_y, v' = u - b v^2 + d_v, with v' saturated at the speed bounds.
// input_min/input_max hold u bounds for controlled vehicles and w bounds for uncontrolled ones.
struct VehicleParams {
    double v_min = 1.39;
    double v_max = 13.9;
    double input_min = -2.5;
    double input_max = 2.5;
    double d_y_min = -0.05;
    double d_y_max = 0.05;
    double d_v_min = -0.05;
    double d_v_max = 0.05;
    double drag_b = 0.001;
    double alpha = 0.0;
    double beta = 5.0;
    bool controlled = true;

    // Throws std::invalid_argument on malformed bounds.
    void validate() const;
};

struct VehicleState {
    double y = 0.0;
    double v = 0.0;
};

struct StateInterval {
    VehicleState lo;
    VehicleState hi;

    bool valid() const { return lo.y <= hi.y && lo.v <= hi.v; }
    bool contains(const VehicleState& s, double tol = 0.0) const;
    bool contains(const StateInterval& other, double tol = 0.0) const;
};

struct NoiseBounds {
    double delta_y_min = 0.0;
    double delta_y_max = 0.0;
    double delta_v_min = 0.0;
    double delta_v_max = 0.0;

    void validate() const;
};

enum class Extreme { Min, Max };

struct Disturbance {
    double d_y = 0.0;
    double d_v = 0.0;
};

Disturbance extreme_disturbance(const VehicleParams& p, Extreme e);

// Piecewise-constant signal on [0, inf). Piece i holds on [start_i, start_{i+1}).
class InputSignal {
public:
    struct Piece {
        double start;
        double value;
    };

    InputSignal() : InputSignal(0.0) {}
    explicit InputSignal(double constant);
    // First piece must start at 0; starts strictly increasing.
    explicit InputSignal(std::vector<Piece> pieces);

    // low on [0, switch_time), high afterwards. switch_time <= 0 gives constant high.
    static InputSignal bang_bang(double low, double switch_time, double high);

    double value_at(double t) const;
    std::span<const Piece> pieces() const { return pieces_; }
    bool within(double lo, double hi) const;
    // Signal seen from time offset dt onward: result(t) = this(t + dt).
    InputSignal shifted(double dt) const;

    // Set when the signal was built by bang_bang.
    std::optional<double> switch_time() const { return switch_time_; }

    friend bool operator==(const InputSignal& a, const InputSignal& b);

private:
    std::vector<Piece> pieces_;
    std::optional<double> switch_time_;
};

struct TrajectorySample {
    double t;
    VehicleState state;
};
using Trajectory = std::vector<TrajectorySample>;

// Saturated speed derivative.
double speed_rate(const VehicleParams& p, double v, double input, double d_v);

// One RK4 step with constant input and disturbance. Speed is clamped to [v_min, v_max] afterwards.
VehicleState rk4_step(const VehicleParams& p, const VehicleState& s, double input,
                      const Disturbance& d, double h);

// Integration grid: each signal piece restarts the grid at its own start, and the last step of a
// piece is shortened to land on the breakpoint. Samples include t = 0.
Trajectory integrate(const VehicleParams& p, const VehicleState& s0, const InputSignal& sig,
                     const Disturbance& d, double horizon, double step);

Trajectory integrate_extremal(const VehicleParams& p, const VehicleState& s0,
                              const InputSignal& sig, Extreme e, double horizon, double step);

// Final state only; same grid as integrate.
VehicleState advance(const VehicleParams& p, const VehicleState& s0, const InputSignal& sig,
                     const Disturbance& d, double horizon, double step);

// lo from (est.lo, min disturbance), hi from (est.hi, max disturbance). Uncontrolled vehicles
// ignore sig and use w_min / w_max.
StateInterval propagate_interval(const VehicleParams& p, const StateInterval& est,
                                 const InputSignal& sig, double horizon, double step);

StateInterval predict_step(const VehicleParams& p, const StateInterval& est,
                           const InputSignal& sig, double tau, double step);

// pred intersected with [meas + delta_min, meas + delta_max]. Throws IncompatibleMeasurement
// when the intersection is empty.
StateInterval correct_estimate(const StateInterval& pred, const VehicleState& meas,
                               const NoiseBounds& noise);

// First time y reaches target_y, linear interpolation within the bracketing step.
// Empty when not reached within 10 * (target_y - s0.y) / v_min.
std::optional<double> crossing_time(const VehicleParams& p, const VehicleState& s0,
                                    const InputSignal& sig, Extreme e, double target_y,
                                    double step);

// Sampled constant-input motion from t = 0, on the same grid as integrate. Sampling stops once
// y passes y_stop or the speed saturates for good; past that point the motion is continued
// analytically (saturated) or by integrating from the last sample.
class MotionProfile {
public:
    MotionProfile(const VehicleParams& p, const VehicleState& start, double input,
                  const Disturbance& d, double step, double y_stop);

    // Integrator state at time t, bit-identical to advance() over [0, t).
    VehicleState state_at(double t) const;
    // Time at which y first reaches target (relative to t = 0); empty if never within the cap.
    std::optional<double> time_to_reach(double target_y) const;
    // True if the speed is pinned at a bound from time t on.
    bool saturated_at(double t) const { return saturation_time_ && t >= *saturation_time_; }
    std::optional<double> saturation_time() const { return saturation_time_; }
    std::size_t sample_count() const { return samples_.size(); }

private:
    std::size_t grid_index(double t) const;

    VehicleParams params_;
    double input_;
    Disturbance dist_;
    double step_;
    std::vector<TrajectorySample> samples_;
    std::optional<double> saturation_time_;
};

} // namespace crossguard
