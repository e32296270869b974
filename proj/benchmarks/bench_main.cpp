#include <numbers>

#include <benchmark/benchmark.h>

#include "lagsurf/classifier.hpp"
#include "lagsurf/forms.hpp"
#include "lagsurf/homology.hpp"
#include "lagsurf/lambda.hpp"
#include "lagsurf/mesh.hpp"
#include "lagsurf/suspension.hpp"
#include "lagsurf/winding.hpp"

namespace {

using namespace lagsurf;

void BM_BuildTorus(benchmark::State& state) {
    const int r = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto mesh = standard_fixture(FixtureKind::Torus, r);
        benchmark::DoNotOptimize(mesh.genus());
    }
}
BENCHMARK(BM_BuildTorus)->Arg(8)->Arg(16)->Arg(32);

void BM_HomologyBasis(benchmark::State& state) {
    auto mesh = standard_fixture(FixtureKind::Torus, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto basis = homology_basis(mesh);
        benchmark::DoNotOptimize(basis.rank());
    }
}
BENCHMARK(BM_HomologyBasis)->Arg(8)->Arg(16)->Arg(32);

void BM_Lambda(benchmark::State& state) {
    const int r = static_cast<int>(state.range(0));
    auto mesh = standard_fixture(FixtureKind::Torus, r);
    auto basis = homology_basis(mesh);
    auto theta = smoothed_angle_field(mesh, basis, {2, 1});
    auto realized = realize_from_automorphism(rotation_field(*theta));
    auto canonical = canonical_field(mesh);
    for (auto _ : state) {
        auto report = lambda(mesh, realized, canonical);
        benchmark::DoNotOptimize(report.lambda);
    }
}
BENCHMARK(BM_Lambda)->Arg(16)->Arg(32);

void BM_SuspensionHomology(benchmark::State& state) {
    auto mesh = standard_fixture(FixtureKind::Torus, 3);
    const int T = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto profile = homology_profile(build_suspension(mesh, T));
        benchmark::DoNotOptimize(profile.ranks[1]);
    }
}
BENCHMARK(BM_SuspensionHomology)->Arg(2)->Arg(3)->Arg(5);

void BM_CompatibleJ(benchmark::State& state) {
    auto mesh = standard_fixture(FixtureKind::Torus, static_cast<int>(state.range(0)));
    auto field = canonical_field(mesh);
    auto metric = identity_metric(mesh);
    for (auto _ : state) {
        auto j = compatible_skad_j(metric, field);
        benchmark::DoNotOptimize(j.j.size());
    }
}
BENCHMARK(BM_CompatibleJ)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
