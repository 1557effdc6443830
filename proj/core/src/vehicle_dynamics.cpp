#include "crossguard/vehicle_dynamics.hpp"

#include "crossguard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace crossguard {

namespace {

// Grid points closer than this to a breakpoint are merged into it.
constexpr double kGridEps = 1e-9;

bool finite(const VehicleState& s) { return std::isfinite(s.y) && std::isfinite(s.v); }

void require_step(double step)
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("integration step must be positive and finite");
}

// Walks the integration grid of sig over [0, horizon). visit(t, state, piece_index) is called
// after every step and returns false to stop. Returns the last state reached.
template <class Visit>
VehicleState walk(const VehicleParams& p, VehicleState s, const InputSignal& sig,
                  const Disturbance& d, double horizon, double step, Visit&& visit)
{
    require_step(step);
    const auto pieces = sig.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double a = pieces[i].start;
        if (a >= horizon)
            break;
        const double b = i + 1 < pieces.size() ? std::min(pieces[i + 1].start, horizon) : horizon;
        const double u = pieces[i].value;
        double prev = a;
        for (std::size_t k = 1;; ++k) {
            double t = a + static_cast<double>(k) * step;
            const bool last = t >= b - kGridEps;
            if (last)
                t = b;
            s = rk4_step(p, s, u, d, t - prev);
            if (!finite(s))
                throw IntegrationDiverged("non-finite state at t=" + std::to_string(t));
            if (!visit(t, s, i))
                return s;
            if (last)
                break;
            prev = t;
        }
    }
    return s;
}

// Speed pinned at a bound with the saturated derivative equal to zero: stays there forever
// under constant input and disturbance.
bool pinned(const VehicleParams& p, const VehicleState& s, double input, const Disturbance& d)
{
    if (s.v != p.v_min && s.v != p.v_max)
        return false;
    return speed_rate(p, s.v, input, d.d_v) == 0.0;
}

double interpolate_time(const TrajectorySample& a, const TrajectorySample& b, double target)
{
    const double dy = b.state.y - a.state.y;
    if (dy <= 0.0)
        return b.t;
    return a.t + (target - a.state.y) / dy * (b.t - a.t);
}

double crossing_cap(const VehicleParams& p, double gap) { return 10.0 * gap / p.v_min; }

} // namespace

void VehicleParams::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("VehicleParams: " + what); };
    if (!(v_min > 0.0))
        fail("v_min must be positive");
    if (!(v_min <= v_max))
        fail("v_min > v_max");
    if (controlled ? !(input_min < input_max) : !(input_min <= input_max))
        fail("input bounds out of order");
    if (!(alpha < beta))
        fail("alpha must be below beta");
    if (!(d_y_min <= 0.0 && 0.0 <= d_y_max) || !(d_v_min <= 0.0 && 0.0 <= d_v_max))
        fail("disturbance bounds must contain 0");
    if (!(drag_b >= 0.0))
        fail("negative drag");
    if (!(v_min + d_y_min > 0.0))
        fail("v_min + d_y_min must be positive");
}

bool StateInterval::contains(const VehicleState& s, double tol) const
{
    return s.y >= lo.y - tol && s.y <= hi.y + tol && s.v >= lo.v - tol && s.v <= hi.v + tol;
}

bool StateInterval::contains(const StateInterval& o, double tol) const
{
    return contains(o.lo, tol) && contains(o.hi, tol);
}

void NoiseBounds::validate() const
{
    if (!(delta_y_min <= delta_y_max) || !(delta_v_min <= delta_v_max))
        throw std::invalid_argument("NoiseBounds: min above max");
}

Disturbance extreme_disturbance(const VehicleParams& p, Extreme e)
{
    return e == Extreme::Min ? Disturbance{p.d_y_min, p.d_v_min} : Disturbance{p.d_y_max, p.d_v_max};
}

InputSignal::InputSignal(double constant) : pieces_{{0.0, constant}} {}

InputSignal::InputSignal(std::vector<Piece> pieces) : pieces_(std::move(pieces))
{
    if (pieces_.empty() || pieces_.front().start != 0.0)
        throw std::invalid_argument("InputSignal: first piece must start at 0");
    for (std::size_t i = 1; i < pieces_.size(); ++i)
        if (!(pieces_[i].start > pieces_[i - 1].start))
            throw std::invalid_argument("InputSignal: breakpoints must increase strictly");
    for (const auto& pc : pieces_)
        if (!std::isfinite(pc.value))
            throw std::invalid_argument("InputSignal: non-finite value");
}

InputSignal InputSignal::bang_bang(double low, double switch_time, double high)
{
    InputSignal sig = switch_time > 0.0 ? InputSignal({{0.0, low}, {switch_time, high}})
                                        : InputSignal(high);
    sig.switch_time_ = std::max(switch_time, 0.0);
    return sig;
}

double InputSignal::value_at(double t) const
{
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double x, const Piece& pc) { return x < pc.start; });
    if (it == pieces_.begin())
        return pieces_.front().value;
    return std::prev(it)->value;
}

bool InputSignal::within(double lo, double hi) const
{
    return std::all_of(pieces_.begin(), pieces_.end(),
                       [&](const Piece& pc) { return pc.value >= lo && pc.value <= hi; });
}

InputSignal InputSignal::shifted(double dt) const
{
    std::vector<Piece> out{{0.0, value_at(dt)}};
    for (const auto& pc : pieces_)
        if (pc.start > dt)
            out.push_back({pc.start - dt, pc.value});
    InputSignal sig(std::move(out));
    if (switch_time_)
        sig.switch_time_ = std::max(*switch_time_ - dt, 0.0);
    return sig;
}

bool operator==(const InputSignal& a, const InputSignal& b)
{
    if (a.pieces_.size() != b.pieces_.size())
        return false;
    for (std::size_t i = 0; i < a.pieces_.size(); ++i)
        if (a.pieces_[i].start != b.pieces_[i].start || a.pieces_[i].value != b.pieces_[i].value)
            return false;
    return true;
}

double speed_rate(const VehicleParams& p, double v, double input, double d_v)
{
    const double g = input - p.drag_b * v * v + d_v;
    if (v <= p.v_min)
        return std::max(0.0, g);
    if (v >= p.v_max)
        return std::min(0.0, g);
    return g;
}

VehicleState rk4_step(const VehicleParams& p, const VehicleState& s, double input,
                      const Disturbance& d, double h)
{
    // Stage speeds are clamped, but the stage rate is the unsaturated one: a saturated (zero)
    // rate would drag the next stage back below the bound, which breaks monotonicity in the input
    // near v_min / v_max. The clamp on the result keeps the saturated semantics.
    auto deriv = [&](double v) {
        const double vc = std::clamp(v, p.v_min, p.v_max);
        return VehicleState{vc + d.d_y, input - p.drag_b * vc * vc + d.d_v};
    };
    const VehicleState k1 = deriv(s.v);
    const VehicleState k2 = deriv(s.v + 0.5 * h * k1.v);
    const VehicleState k3 = deriv(s.v + 0.5 * h * k2.v);
    const VehicleState k4 = deriv(s.v + h * k3.v);
    VehicleState out;
    out.y = s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    out.v = std::clamp(s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v), p.v_min, p.v_max);
    return out;
}

Trajectory integrate(const VehicleParams& p, const VehicleState& s0, const InputSignal& sig,
                     const Disturbance& d, double horizon, double step)
{
    Trajectory out{{0.0, s0}};
    walk(p, s0, sig, d, horizon, step, [&](double t, const VehicleState& s, std::size_t) {
        out.push_back({t, s});
        return true;
    });
    return out;
}

Trajectory integrate_extremal(const VehicleParams& p, const VehicleState& s0,
                              const InputSignal& sig, Extreme e, double horizon, double step)
{
    return integrate(p, s0, sig, extreme_disturbance(p, e), horizon, step);
}

VehicleState advance(const VehicleParams& p, const VehicleState& s0, const InputSignal& sig,
                     const Disturbance& d, double horizon, double step)
{
    return walk(p, s0, sig, d, horizon, step, [](double, const VehicleState&, std::size_t) { return true; });
}

StateInterval propagate_interval(const VehicleParams& p, const StateInterval& est,
                                 const InputSignal& sig, double horizon, double step)
{
    if (!est.valid())
        throw std::invalid_argument("propagate_interval: invalid estimate");
    const InputSignal lo_sig = p.controlled ? sig : InputSignal(p.input_min);
    const InputSignal hi_sig = p.controlled ? sig : InputSignal(p.input_max);
    StateInterval out;
    out.lo = advance(p, est.lo, lo_sig, extreme_disturbance(p, Extreme::Min), horizon, step);
    out.hi = advance(p, est.hi, hi_sig, extreme_disturbance(p, Extreme::Max), horizon, step);
    return out;
}

StateInterval predict_step(const VehicleParams& p, const StateInterval& est,
                           const InputSignal& sig, double tau, double step)
{
    return propagate_interval(p, est, sig, tau, step);
}

StateInterval correct_estimate(const StateInterval& pred, const VehicleState& meas,
                               const NoiseBounds& noise)
{
    StateInterval out;
    out.lo.y = std::max(pred.lo.y, meas.y + noise.delta_y_min);
    out.hi.y = std::min(pred.hi.y, meas.y + noise.delta_y_max);
    out.lo.v = std::max(pred.lo.v, meas.v + noise.delta_v_min);
    out.hi.v = std::min(pred.hi.v, meas.v + noise.delta_v_max);
    if (!out.valid())
        throw IncompatibleMeasurement("measurement band does not intersect the prediction");
    return out;
}

std::optional<double> crossing_time(const VehicleParams& p, const VehicleState& s0,
                                    const InputSignal& sig, Extreme e, double target_y,
                                    double step)
{
    if (s0.y >= target_y)
        return 0.0;
    const Disturbance d = extreme_disturbance(p, e);
    const double cap = crossing_cap(p, target_y - s0.y);
    const std::size_t last_piece = sig.pieces().size() - 1;
    const double last_start = sig.pieces().back().start;
    std::optional<double> hit;
    TrajectorySample prev{0.0, s0};
    walk(p, s0, sig, d, cap, step, [&](double t, const VehicleState& s, std::size_t piece) {
        if (s.y >= target_y) {
            hit = interpolate_time(prev, {t, s}, target_y);
            return false;
        }
        if (piece == last_piece && t >= last_start &&
            pinned(p, s, sig.pieces().back().value, d)) {
            const double rate = s.v + d.d_y;
            const double tc = t + (target_y - s.y) / rate;
            if (tc <= cap)
                hit = tc;
            return false;
        }
        prev = {t, s};
        return true;
    });
    return hit;
}

MotionProfile::MotionProfile(const VehicleParams& p, const VehicleState& start, double input,
                             const Disturbance& d, double step, double y_stop)
    : params_(p), input_(input), dist_(d), step_(step)
{
    require_step(step);
    samples_.push_back({0.0, start});
    if (pinned(p, start, input, d)) {
        saturation_time_ = 0.0;
        return;
    }
    const double cap = crossing_cap(p, std::max(y_stop - start.y, 0.0)) + step;
    walk(p, start, InputSignal(input), d, std::numeric_limits<double>::infinity(), step,
         [&](double t, const VehicleState& s, std::size_t) {
             samples_.push_back({t, s});
             if (pinned(p, s, input, d)) {
                 saturation_time_ = t;
                 return false;
             }
             return s.y < y_stop && t < cap;
         });
}

std::size_t MotionProfile::grid_index(double t) const
{
    // Largest k with k * step < t - eps, matching the walk's breakpoint test.
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor(t / step_)));
    while (k > 0 && static_cast<double>(k) * step_ >= t - kGridEps)
        --k;
    while (static_cast<double>(k + 1) * step_ < t - kGridEps)
        ++k;
    return k;
}

VehicleState MotionProfile::state_at(double t) const
{
    if (t <= 0.0)
        return samples_.front().state;
    const std::size_t last = samples_.size() - 1;
    if (saturation_time_ && t >= samples_[last].t) {
        VehicleState s = samples_[last].state;
        s.y += (t - samples_[last].t) * (s.v + dist_.d_y);
        return s;
    }
    const std::size_t k = grid_index(t);
    if (k <= last) {
        if (k == last && !(samples_[k].t < t - kGridEps))
            return samples_[k].state;
        return rk4_step(params_, samples_[k].state, input_, dist_, t - samples_[k].t);
    }
    // Beyond the sampled range: keep stepping on the same grid.
    VehicleState s = samples_[last].state;
    double prev = samples_[last].t;
    for (std::size_t j = last + 1;; ++j) {
        double tj = static_cast<double>(j) * step_;
        const bool done = tj >= t - kGridEps;
        if (done)
            tj = t;
        s = rk4_step(params_, s, input_, dist_, tj - prev);
        if (!finite(s))
            throw IntegrationDiverged("non-finite state in profile extension");
        if (done)
            return s;
        prev = tj;
    }
}

std::optional<double> MotionProfile::time_to_reach(double target_y) const
{
    const VehicleState& s0 = samples_.front().state;
    if (s0.y >= target_y)
        return 0.0;
    const double cap = crossing_cap(params_, target_y - s0.y);
    auto it = std::lower_bound(samples_.begin(), samples_.end(), target_y,
                               [](const TrajectorySample& a, double y) { return a.state.y < y; });
    if (it != samples_.end()) {
        const double t = interpolate_time(*std::prev(it), *it, target_y);
        return t <= cap ? std::optional<double>(t) : std::nullopt;
    }
    const TrajectorySample& tail = samples_.back();
    if (saturation_time_) {
        const double rate = tail.state.v + dist_.d_y;
        const double t = tail.t + (target_y - tail.state.y) / rate;
        return t <= cap ? std::optional<double>(t) : std::nullopt;
    }
    TrajectorySample prev = tail;
    for (std::size_t j = samples_.size();; ++j) {
        const double tj = static_cast<double>(j) * step_;
        if (tj > cap + step_)
            return std::nullopt;
        const VehicleState s = rk4_step(params_, prev.state, input_, dist_, tj - prev.t);
        if (!finite(s))
            throw IntegrationDiverged("non-finite state in profile extension");
        if (s.y >= target_y) {
            const double t = interpolate_time(prev, {tj, s}, target_y);
            return t <= cap ? std::optional<double>(t) : std::nullopt;
        }
        if (pinned(params_, s, input_, dist_)) {
            const double t = tj + (target_y - s.y) / (s.v + dist_.d_y);
            return t <= cap ? std::optional<double>(t) : std::nullopt;
        }
        prev = {tj, s};
    }
}

} // namespace crossguard
