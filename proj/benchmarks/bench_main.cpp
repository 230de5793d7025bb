#include <benchmark/benchmark.h>

#include "dso/dso.hpp"

namespace {

struct EvalSetup {
    explicit EvalSetup(Eigen::Index n, Eigen::Index d)
        : cbc(n, d), gbc(dso::Vector::Zero(d)), prev(dso::Matrix::Zero(n, d)), lb(dso::Vector::Constant(d, -100)),
          ub(dso::Vector::Constant(d, 100)), interval(ub - lb)
    {
        dso::Random rng(1);
        for (Eigen::Index i = 0; i < cbc.size(); ++i) {
            cbc.data()[i] = rng.uniform(-100, 100);
        }
        values = cbc.rowwise().squaredNorm();
        pbest = dso::make_pbest_model(cbc, values, interval, 0.25);
    }
    dso::Matrix cbc;
    dso::Vector gbc;
    dso::Matrix prev;
    dso::Vector lb;
    dso::Vector ub;
    dso::Vector interval;
    dso::Vector values;
    dso::PBestModel pbest;
};

void BM_EvaluateRand1(benchmark::State& state)
{
    EvalSetup s(25, state.range(0));
    const auto f = dso::rand1_firmware();
    dso::Random rng(2);
    const auto perms = dso::draw_permutations(3, 25, rng);
    std::size_t d = 0;
    for (auto _ : state) {
        const dso::EvalContext ctx{s.cbc, s.gbc, s.prev, s.lb, s.ub, s.interval, s.pbest, {}, d, perms};
        benchmark::DoNotOptimize(dso::evaluate(f, ctx, rng));
        d = (d + 1) % 25;
    }
}
BENCHMARK(BM_EvaluateRand1)->Arg(10)->Arg(30);

void BM_EvaluateMvnsStep(benchmark::State& state)
{
    EvalSetup s(25, state.range(0));
    const auto f = dso::mvns_step_firmware();
    dso::Random rng(2);
    for (auto _ : state) {
        const dso::EvalContext ctx{s.cbc, s.gbc, s.prev, s.lb, s.ub, s.interval, s.pbest, {}, 0};
        benchmark::DoNotOptimize(dso::evaluate(f, ctx, rng));
    }
}
BENCHMARK(BM_EvaluateMvnsStep)->Arg(10)->Arg(30);

void BM_PBestModel(benchmark::State& state)
{
    EvalSetup s(25, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dso::make_pbest_model(s.cbc, s.values, s.interval, 0.25));
    }
}
BENCHMARK(BM_PBestModel)->Arg(10)->Arg(30);

void BM_MutateVariant(benchmark::State& state)
{
    const auto base = dso::rand1_firmware();
    dso::Random rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dso::mutate_variant(base, rng));
    }
}
BENCHMARK(BM_MutateVariant);

void BM_Objective(benchmark::State& state)
{
    const auto fn = dso::all_functions()[static_cast<std::size_t>(state.range(0))];
    const auto p = dso::make_problem(fn, 10, 1);
    dso::Vector x = p.shift() * 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p(x));
    }
    state.SetLabel(std::string(dso::function_name(fn)));
}
BENCHMARK(BM_Objective)->DenseRange(0, 6);

void BM_ShortRun(benchmark::State& state)
{
    const auto p = dso::make_problem(dso::Function::Rastrigin, 10, 1);
    dso::DsoConfig cfg;
    cfg.budget = 10000;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dso::run(p, cfg, seed++));
    }
}
BENCHMARK(BM_ShortRun)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
