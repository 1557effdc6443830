#include "crossguard/bench.hpp"
#include "crossguard/efficient_scheduler.hpp"
#include "crossguard/errors.hpp"
#include "crossguard/exact_scheduler.hpp"
#include "crossguard/scenario.hpp"
#include "crossguard/simulation.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace cg = crossguard;

namespace {

struct Setup {
    std::vector<cg::VehicleModel> models;
    std::vector<cg::StateInterval> est;
    cg::VerifyOptions opts;
};

// Scenario 1 stretched to n controlled vehicles, estimated from the noise-free initial state.
Setup scaled(std::size_t n)
{
    static const cg::ScenarioConfig tmpl = cg::load_scenario(CROSSGUARD_SCENARIO_DIR "/scenario1.txt");
    const cg::ScenarioConfig cfg = cg::scale_scenario(tmpl, n);
    Setup s;
    s.models = cg::make_models(cfg.fleet(), cfg.tau / 10.0);
    for (const auto& v : cfg.vehicles)
        s.est.push_back(cg::initial_estimate(v, v.initial));
    s.opts.dynamics.step = cfg.tau / 10.0;
    return s;
}

void BM_ApproxVerify(benchmark::State& state)
{
    const Setup s = scaled(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(cg::approx_verify(s.models, s.est, s.opts));
}
BENCHMARK(BM_ApproxVerify)->DenseRange(4, 40, 6)->Unit(benchmark::kMillisecond);

void BM_ExactVerify(benchmark::State& state)
{
    const Setup s = scaled(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(cg::exact_verify(s.models, s.est, s.opts));
}
BENCHMARK(BM_ExactVerify)->DenseRange(2, 12, 2)->Unit(benchmark::kMillisecond);

// Full permutation sweep: every controlled vehicle is 3 m out at speed and cannot stop, so no order works.
void BM_ExactExhaustive(benchmark::State& state)
{
    Setup s = scaled(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < s.est.size(); ++i) {
        if (!s.models[i].params().controlled)
            continue;
        s.est[i].lo = {-4.0, 13.0};
        s.est[i].hi = {-3.0, 13.0};
    }
    for (auto _ : state) {
        const cg::Verdict v = cg::exact_verify(s.models, s.est, s.opts);
        if (v.yes)
            state.SkipWithError("instance unexpectedly feasible");
    }
}
BENCHMARK(BM_ExactExhaustive)->DenseRange(2, 7, 1)->Unit(benchmark::kMillisecond);

cg::UnitJobSet random_jobs(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    cg::UnitJobSet jobs;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u01(rng) * static_cast<double>(n);
        jobs.release.push_back(r);
        jobs.deadline.push_back(r + u01(rng) * static_cast<double>(n));
    }
    return jobs;
}

void BM_Polynomial(benchmark::State& state)
{
    const cg::UnitJobSet jobs = random_jobs(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(cg::polynomial(jobs));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Polynomial)->RangeMultiplier(2)->Range(8, 512)->Complexity();

} // namespace

BENCHMARK_MAIN();
