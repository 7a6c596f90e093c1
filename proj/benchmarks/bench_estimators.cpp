#include <benchmark/benchmark.h>

#include "nullest/adaptation.hpp"
#include "nullest/baselines.hpp"
#include "nullest/location.hpp"
#include "nullest/lowerbound.hpp"
#include "nullest/mode.hpp"
#include "nullest/parallel.hpp"
#include "nullest/sim.hpp"
#include "nullest/variance.hpp"

namespace {

using namespace nullest;

Sample contaminated(std::size_t n, double frac) {
    const auto k = static_cast<std::size_t>(frac * static_cast<double>(n));
    return generate_frequentist(NullParams{0.0, 1.0}, ContaminationSpec{k, ContaminationKind::constant_shift, 10.0, {}},
                                n, 7);
}

void BM_EcfEval(benchmark::State& state) {
    const Sample x = contaminated(static_cast<std::size_t>(state.range(0)), 0.3);
    double w = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ecf_eval(x, w));
        w += 1e-6;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EcfEval)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_KnownVarLocation(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Sample x = contaminated(n, 0.3);
    const Hyperparams hp;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_location_known_var(x, 3 * n / 10, 1.0, hp));
}
BENCHMARK(BM_KnownVarLocation)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_UnknownVarLocation(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Sample x = contaminated(n, 0.3);
    const Hyperparams hp;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_location_unknown_var(x, 3 * n / 10, hp, 1));
}
BENCHMARK(BM_UnknownVarLocation)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Variance(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Sample x = contaminated(n, 0.3);
    const Hyperparams hp;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_variance(x, 3 * n / 10, hp, 1));
}
BENCHMARK(BM_Variance)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_PilotVariance(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Sample x = contaminated(n, 0.3);
    const PilotConfig cfg = PilotConfig::defaults(n, Hyperparams{}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(pilot_variance(x, cfg));
}
BENCHMARK(BM_PilotVariance)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_KernelMode(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Sample x = contaminated(n, 0.45);
    for (auto _ : state) benchmark::DoNotOptimize(kernel_mode(x, 1.0));
}
BENCHMARK(BM_KernelMode)->Arg(5000)->Arg(100000);

void BM_CaiJin(benchmark::State& state) {
    const Sample x = contaminated(static_cast<std::size_t>(state.range(0)), 0.1);
    const CaiJinConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(caijin_location(x, cfg));
}
BENCHMARK(BM_CaiJin)->Arg(10000);

void BM_LepskiLocation(benchmark::State& state) {
    const Sample x = contaminated(static_cast<std::size_t>(state.range(0)), 0.15);
    const Hyperparams hp;
    for (auto _ : state) benchmark::DoNotOptimize(lepski_location(x, hp, 1));
}
BENCHMARK(BM_LepskiLocation)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_DeltaClosedForm(benchmark::State& state) {
    const PriorConstruction pc = PriorConstruction::make(0.3, 10000, 1.0 / 24.0, 3.0);
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(delta_closed_form(x, pc));
        x += 1e-5;
    }
}
BENCHMARK(BM_DeltaClosedForm);

}  // namespace

int main(int argc, char** argv) {
    set_worker_count(1);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
