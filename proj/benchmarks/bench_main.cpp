#include "safeplan/safeplan.hpp"

#include <benchmark/benchmark.h>

using namespace safeplan;

namespace {

void BM_SolveLogistics(benchmark::State &state) {
    const int locations = static_cast<int>(state.range(0));
    const ActionModel truth = gen_logistics({locations, 2, 2, 0});
    const State init(std::vector<ValueId>{0, 0, 1, 1});
    const PartialAssignment goal{{2, static_cast<ValueId>(locations - 1)},
                                 {3, static_cast<ValueId>(locations - 2)}};
    const Problem p(truth, init, goal);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_SolveLogistics)->Arg(3)->Arg(5)->Arg(8);

void BM_Learn(benchmark::State &state) {
    const ActionModel truth = gen_logistics({4, 2, 2, 0});
    const auto corpus = sample_corpus(truth, DistConfig{}, static_cast<std::size_t>(state.range(0)), RngStream(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(learn(corpus, truth.variables()));
}
BENCHMARK(BM_Learn)->Arg(100)->Arg(1000);

void BM_AuditExhaustive(benchmark::State &state) {
    const ActionModel truth = gen_logistics({5, 2, 2, 0});
    for (auto _ : state)
        benchmark::DoNotOptimize(audit_safety(truth, truth));
}
BENCHMARK(BM_AuditExhaustive);

} // namespace

BENCHMARK_MAIN();
