#include "crossguard/simulation.hpp"

#include "crossguard/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>

namespace crossguard {

namespace {

constexpr double kGridEps = 1e-9;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on [a, b] from the top 53 bits, identical on every platform.
double uniform(std::mt19937_64& rng, double a, double b)
{
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
}

double position_at(const Trajectory& tr, double t)
{
    auto it = std::lower_bound(tr.begin(), tr.end(), t,
                               [](const TrajectorySample& s, double x) { return s.t < x - kGridEps; });
    if (it == tr.end())
        return tr.back().state.y;
    if (std::abs(it->t - t) <= kGridEps || it == tr.begin())
        return it->state.y;
    const auto& a = *std::prev(it);
    return a.state.y + (t - a.t) / (it->t - a.t) * (it->state.y - a.state.y);
}

bool collision(std::span<const VehicleParams> fleet, std::span<const double> y)
{
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        if (!(y[i] > fleet[i].alpha && y[i] < fleet[i].beta))
            continue;
        for (std::size_t j = i + 1; j < fleet.size(); ++j)
            if ((fleet[i].controlled || fleet[j].controlled) && y[j] > fleet[j].alpha &&
                y[j] < fleet[j].beta)
                return true;
    }
    return false;
}

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

} // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t vehicle)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(vehicle + 0x632be59bd9b4e019ULL));
}

StateInterval initial_estimate(const VehicleSpec& v, const VehicleState& meas)
{
    const VehicleParams& p = v.params;
    StateInterval est;
    est.lo = {meas.y + v.noise.delta_y_min,
              std::clamp(meas.v + v.noise.delta_v_min, p.v_min, p.v_max)};
    est.hi = {meas.y + v.noise.delta_y_max,
              std::clamp(meas.v + v.noise.delta_v_max, p.v_min, p.v_max)};
    return est;
}

SimulationResult run_simulation(const ScenarioConfig& cfg, SupervisorMode mode,
                                const SimulationOptions& opts)
{
    cfg.validate();
    const std::size_t n = cfg.vehicles.size();
    const std::vector<VehicleParams> fleet = cfg.fleet();
    SupervisorConfig scfg;
    scfg.tau = cfg.tau;
    scfg.substeps = opts.substeps;
    scfg.theta_samples = opts.theta_samples;
    scfg.permutation_cap = opts.permutation_cap;
    const double step = scfg.step();

    std::vector<std::mt19937_64> rng;
    std::vector<VehicleState> truth;
    std::vector<InputSignal> desired;
    for (const auto& v : cfg.vehicles) {
        rng.emplace_back(substream_seed(cfg.seed, static_cast<std::uint64_t>(v.id)));
        truth.push_back(v.initial);
        desired.emplace_back(v.params.controlled ? v.desired : 0.0);
    }

    SimulationResult out;
    RunMetrics& m = out.metrics;
    std::optional<SupervisorSession> session;
    std::vector<StateInterval> est(n);
    std::vector<VehicleState> meas(n);
    std::vector<double> y(n);
    double wall_sum = 0.0;

    for (std::size_t k = 0; k < cfg.steps; ++k) {
        // Fixed draw count per vehicle and step keeps streams aligned.
        std::vector<Disturbance> dist(n);
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            const VehicleSpec& v = cfg.vehicles[i];
            const double ny = uniform(rng[i], v.noise.delta_y_min, v.noise.delta_y_max);
            const double nv = uniform(rng[i], v.noise.delta_v_min, v.noise.delta_v_max);
            dist[i].d_y = uniform(rng[i], v.params.d_y_min, v.params.d_y_max);
            dist[i].d_v = uniform(rng[i], v.params.d_v_min, v.params.d_v_max);
            w[i] = uniform(rng[i], v.params.input_min, v.params.input_max);
            // The scenario states the initial state exactly, so step 0 is measured without
            // noise; the draws are still consumed to keep the streams aligned.
            meas[i] = k == 0 ? truth[i] : VehicleState{truth[i].y - ny, truth[i].v - nv};
        }

        StepDecision d;
        if (k == 0) {
            for (std::size_t i = 0; i < n; ++i)
                est[i] = initial_estimate(cfg.vehicles[i], meas[i]);
            auto [s, dec] = initialize_session(mode, fleet, est, desired, scfg);
            session.emplace(std::move(s));
            d = std::move(dec);
        } else {
            const auto& pred = session->last_prediction();
            for (std::size_t i = 0; i < n; ++i) {
                try {
                    est[i] = correct_estimate(pred[i], meas[i], cfg.vehicles[i].noise);
                } catch (const IncompatibleMeasurement&) {
                    est[i] = pred[i];
                    ++m.incompatible_measurements;
                }
            }
            try {
                d = supervisor_step(*session, est, desired);
            } catch (const BlockedState&) {
                ++m.blocked;
                break;
            }
        }

        ++m.steps_run;
        out.iteration_s.push_back(d.wall_s);
        wall_sum += d.wall_s;
        m.max_iter_s = std::max(m.max_iter_s, d.wall_s);
        if (d.overridden)
            ++m.overrides;
        if (d.fallback_used)
            ++m.fallbacks;

        for (std::size_t i = 0; i < n; ++i) {
            TraceRecord r;
            r.step = k;
            r.vehicle = cfg.vehicles[i].id;
            r.truth = truth[i];
            r.measured = meas[i];
            r.estimate = est[i];
            r.input = fleet[i].controlled ? d.output[i].value_at(0.0) : w[i];
            r.overridden = d.overridden;
            r.answer = d.verifier_yes;
            r.wall_s = opts.record_wall_time ? d.wall_s : 0.0;
            if (!est[i].contains(truth[i], 1e-9))
                ++m.containment_violations;
            out.trace.push_back(r);
        }

        // Advance the true states over one period.
        std::vector<Trajectory> traj(n);
        for (std::size_t i = 0; i < n; ++i) {
            const InputSignal sig = fleet[i].controlled ? d.output[i] : InputSignal(w[i]);
            traj[i] = integrate(fleet[i], truth[i], sig, dist[i], cfg.tau, step);
            truth[i] = traj[i].back().state;
        }
        bool hit = false;
        for (std::size_t q = 0; !hit; ++q) {
            double t = static_cast<double>(q) * step;
            const bool last = t >= cfg.tau - kGridEps;
            if (last)
                t = cfg.tau;
            for (std::size_t i = 0; i < n; ++i)
                y[i] = position_at(traj[i], t);
            hit = collision(fleet, y);
            if (last)
                break;
        }
        if (hit)
            ++m.collisions;

        if (opts.iteration_budget_s && d.wall_s > *opts.iteration_budget_s) {
            out.budget_exceeded = true;
            break;
        }
        bool all_past = true;
        for (std::size_t i = 0; i < n; ++i)
            all_past = all_past && truth[i].y >= fleet[i].beta;
        if (all_past) {
            m.completed = true;
            break;
        }
    }

    if (m.steps_run > 0)
        m.mean_iter_s = wall_sum / static_cast<double>(m.steps_run);
    if (!opts.record_wall_time) {
        m.max_iter_s = 0.0;
        m.mean_iter_s = 0.0;
    }
    return out;
}

void write_trace(std::ostream& os, std::span<const TraceRecord> trace)
{
    os << kTraceHeader << '\n';
    for (const auto& r : trace) {
        os << r.step << ',' << r.vehicle << ',' << num(r.truth.y) << ',' << num(r.truth.v) << ','
           << num(r.measured.y) << ',' << num(r.measured.v) << ',' << num(r.estimate.lo.y) << ','
           << num(r.estimate.hi.y) << ',' << num(r.estimate.lo.v) << ',' << num(r.estimate.hi.v)
           << ',' << num(r.input) << ',' << (r.overridden ? 1 : 0) << ',' << (r.answer ? 1 : 0)
           << ',' << num(r.wall_s) << '\n';
    }
}

void write_metrics(std::ostream& os, const RunMetrics& m)
{
    os << "collisions=" << m.collisions << '\n'
       << "overrides=" << m.overrides << '\n'
       << "blocked=" << m.blocked << '\n'
       << "incompatible_measurements=" << m.incompatible_measurements << '\n'
       << "max_iter_s=" << num(m.max_iter_s) << '\n'
       << "mean_iter_s=" << num(m.mean_iter_s) << '\n'
       << "completed=" << (m.completed ? 1 : 0) << '\n';
}

void emit_outputs(std::span<const TraceRecord> trace, const RunMetrics& m,
                  const std::filesystem::path& trace_path, const std::filesystem::path& metrics_path)
{
    auto open = [](const std::filesystem::path& p) {
        std::ofstream os(p, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open " + p.string() + " for writing");
        return os;
    };
    {
        std::ofstream os = open(trace_path);
        write_trace(os, trace);
        if (!os.flush())
            throw std::runtime_error("write failed: " + trace_path.string());
    }
    {
        std::ofstream os = open(metrics_path);
        write_metrics(os, m);
        if (!os.flush())
            throw std::runtime_error("write failed: " + metrics_path.string());
    }
}

} // namespace crossguard
