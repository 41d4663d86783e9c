#include <benchmark/benchmark.h>

#include "leflab/cohomology.hpp"
#include "leflab/heat.hpp"
#include "leflab/models.hpp"
#include "leflab/selfmap.hpp"
#include "leflab/spectral.hpp"

using namespace leflab;

namespace {

selfmap::ProfileSpec one_crossing() {
    selfmap::ProfileSpec s;
    s.kind = selfmap::ProfileSpec::Kind::one_crossing;
    s.crossing = 0.55;
    s.crossing_slope = 1.7;
    s.interior_slope = 0.4;
    return s;
}

void bm_build_disk(benchmark::State& state) {
    for (auto _ : state) {
        auto m = catalog::build_model("disk", static_cast<int>(state.range(0)), 0.1);
        benchmark::DoNotOptimize(m.complex.num_vertices);
    }
}
BENCHMARK(bm_build_disk)->Arg(16)->Arg(32);

void bm_disk_betti(benchmark::State& state) {
    auto m = catalog::build_model("disk", static_cast<int>(state.range(0)), 0.1);
    for (auto _ : state) {
        auto b = m.abs_cochain.betti();
        benchmark::DoNotOptimize(b[0]);
    }
}
BENCHMARK(bm_disk_betti)->Arg(16)->Arg(32);

void bm_simplicial_trace(benchmark::State& state) {
    auto m = catalog::build_model("disk", 32, 0.1);
    auto vm = cohomology::scenario_vertex_map(m, selfmap::BoundaryIsometry::parse("reflection"));
    for (auto _ : state) {
        auto t = cohomology::induced_trace_simplicial(m, vm);
        benchmark::DoNotOptimize(t.abs[0]);
    }
}
BENCHMARK(bm_simplicial_trace);

void bm_equivariant_trace(benchmark::State& state) {
    auto m = catalog::build_model("disk", 8, 0.1);
    spectral::SpectralBasis sb(m, static_cast<double>(state.range(0)));
    auto b = selfmap::BoundaryIsometry::parse("rotation:0.9");
    for (auto _ : state) {
        double v = sb.equivariant_trace(b, 0, spectral::Restriction::all, 0.05);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_equivariant_trace)->Arg(1000)->Arg(2000);

void bm_cylinder_kernel(benchmark::State& state) {
    auto m = catalog::build_model("disk", 8, 0.1);
    spectral::SpectralBasis sb(m, 1000.0);
    heat::CylinderPoint x{0.05, {0, {0.3}}}, z{0.02, {0, {0.35}}};
    for (auto _ : state) {
        auto k = heat::cylinder_kernel_eval(sb, heat::BoundaryCondition::PminusL0, 1, 0.1, x, z);
        benchmark::DoNotOptimize(k[0][0]);
    }
}
BENCHMARK(bm_cylinder_kernel);

void bm_fixed_points(benchmark::State& state) {
    auto m = catalog::build_model("disk", 16, 0.1);
    auto map = selfmap::make_condition_a_map(m, 0.5,
                                             selfmap::BoundaryIsometry::parse("reflection"),
                                             one_crossing());
    for (auto _ : state) {
        auto r = selfmap::find_fixed_points(map, static_cast<int>(state.range(0)), 1e-12);
        benchmark::DoNotOptimize(r.records.size());
    }
}
BENCHMARK(bm_fixed_points)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
