#include "crossguard/oracle.hpp"

#include "crossguard/bad_set.hpp"
#include "crossguard/errors.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace crossguard {

namespace {

constexpr double kEps = 1e-9;

struct Occupancy {
    double a;
    double b;
};

bool disjoint(const Occupancy& x, const Occupancy& y)
{
    if (x.b <= x.a || y.b <= y.a)
        return true;
    return x.b <= y.a + kEps || y.b <= x.a + kEps;
}

double reach(const VehicleParams& p, const VehicleState& s, const InputSignal& sig, Extreme e,
             double target, double step)
{
    const auto t = crossing_time(p, s, sig, e, target, step);
    if (!t)
        throw IntegrationDiverged("oracle: crossing not reached");
    return *t;
}

bool search(const std::vector<std::vector<Occupancy>>& cand, std::vector<Occupancy>& chosen,
            std::size_t depth)
{
    if (depth == cand.size())
        return true;
    for (const auto& c : cand[depth]) {
        bool ok = true;
        for (std::size_t k = 0; k < depth && ok; ++k)
            ok = disjoint(c, chosen[k]);
        if (!ok)
            continue;
        chosen[depth] = c;
        if (search(cand, chosen, depth + 1))
            return true;
    }
    return false;
}

} // namespace

bool brute_force_safe_input_oracle(std::span<const VehicleParams> fleet,
                                   std::span<const StateInterval> est, const OracleConfig& cfg)
{
    const std::size_t n = fleet.size();
    const std::size_t n_c = static_cast<std::size_t>(
        std::count_if(fleet.begin(), fleet.end(), [](const VehicleParams& p) { return p.controlled; }));
    if (n_c > cfg.max_controlled)
        throw OracleTooLarge("oracle limited to " + std::to_string(cfg.max_controlled) +
                             " controlled vehicles, got " + std::to_string(n_c));

    std::vector<double> exits(n);
    for (std::size_t i = 0; i < n; ++i)
        exits[i] = fleet[i].controlled && cfg.bad_set == BadSetKind::Inflated
                       ? fleet[i].alpha + cfg.theta * fleet[i].v_max
                       : fleet[i].beta;
    if (bad_set_overlap(fleet, est, exits))
        return false;

    std::vector<Occupancy> fixed;
    for (std::size_t i = 0; i < n; ++i) {
        const VehicleParams& p = fleet[i];
        if (p.controlled || est[i].lo.y >= p.beta)
            continue;
        const double start = est[i].hi.y >= p.alpha
                                 ? 0.0
                                 : reach(p, est[i].hi, InputSignal(p.input_max), Extreme::Max, p.alpha, cfg.step);
        const double end = reach(p, est[i].lo, InputSignal(p.input_min), Extreme::Min, p.beta, cfg.step);
        fixed.push_back({start, end});
    }

    std::vector<std::vector<Occupancy>> cand;
    for (std::size_t i = 0; i < n; ++i) {
        const VehicleParams& p = fleet[i];
        if (!p.controlled)
            continue;
        const double exit_pos = exits[i];
        if (est[i].lo.y >= exit_pos)
            continue;
        const InputSignal brake(p.input_min);
        const double latest = reach(p, est[i].lo, brake, Extreme::Min, exit_pos, cfg.step);
        std::vector<InputSignal> family{brake};
        const std::size_t m = std::max<std::size_t>(cfg.switch_points, 2);
        for (std::size_t q = 0; q < m; ++q)
            family.push_back(InputSignal::bang_bang(
                p.input_min, latest * static_cast<double>(q) / static_cast<double>(m - 1), p.input_max));
        std::vector<Occupancy> occ;
        for (const auto& sig : family) {
            const double a = est[i].hi.y >= p.alpha
                                 ? 0.0
                                 : reach(p, est[i].hi, sig, Extreme::Max, p.alpha, cfg.step);
            const double b = reach(p, est[i].lo, sig, Extreme::Min, exit_pos, cfg.step);
            const Occupancy o{a, b};
            if (std::all_of(fixed.begin(), fixed.end(), [&](const Occupancy& f) { return disjoint(o, f); }))
                occ.push_back(o);
        }
        std::sort(occ.begin(), occ.end(),
                  [](const Occupancy& x, const Occupancy& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); });
        occ.erase(std::unique(occ.begin(), occ.end(),
                              [](const Occupancy& x, const Occupancy& y) { return x.a == y.a && x.b == y.b; }),
                  occ.end());
        if (occ.empty())
            return false;
        cand.push_back(std::move(occ));
    }
    std::vector<Occupancy> chosen(cand.size());
    return search(cand, chosen, 0);
}

} // namespace crossguard
