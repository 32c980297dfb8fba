#include <uedge/bootstrap.hpp>
#include <uedge/cramer.hpp>
#include <uedge/cumulants.hpp>
#include <uedge/edgeworth.hpp>
#include <uedge/families.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace uedge;

const FamilyRegistry& registry() {
    static const FamilyRegistry reg = register_builtin_families();
    return reg;
}

void BM_MomentsToCumulants(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Dataset data = registry().make("centered-exponential").draw(1000, 3);
    std::vector<double> v;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (int k = 0; k < d; ++k) v.push_back(data(i, 0) * (k + 1) + k);
    }
    const MomentSet m = raw_moments(Dataset(static_cast<std::size_t>(d), v), 6);
    for (auto _ : state) benchmark::DoNotOptimize(moments_to_cumulants(m));
}
BENCHMARK(BM_MomentsToCumulants)->Arg(1)->Arg(2)->Arg(3);

void BM_DensityEval(benchmark::State& state) {
    const int s = static_cast<int>(state.range(0));
    const Family f = registry().make("exp-t-pair");
    const EdgeworthExpansion e = build_expansion(standardized_family_cumulants(f, s), 100, s);
    const double x[2] = {0.3, -0.7};
    for (auto _ : state) benchmark::DoNotOptimize(e.density(x));
}
BENCHMARK(BM_DensityEval)->Arg(3)->Arg(4)->Arg(5);

void BM_BootstrapDraws(benchmark::State& state) {
    const Dataset data = registry().make("centered-exponential").draw(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(bootstrap_draws(data, 10'000, 9));
    state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_BootstrapDraws)->Arg(100)->Arg(400);

void BM_CfScan(benchmark::State& state) {
    const Dataset data = registry().make("three-point-irrational").draw(300, 7);
    const auto h = CharFunctionHandle::empirical(data);
    ScanOptions opt;
    opt.T_max = 100.0;
    opt.grid.refine = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(weak_cramer_scan(h, opt));
}
BENCHMARK(BM_CfScan)->Arg(0)->Arg(1);

} // namespace

BENCHMARK_MAIN();
