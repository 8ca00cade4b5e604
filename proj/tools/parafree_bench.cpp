#include <benchmark/benchmark.h>

#include <vector>

#include "parafree/free_boundary.hpp"
#include "parafree/grid.hpp"
#include "parafree/model_fields.hpp"
#include "parafree/operators.hpp"
#include "parafree/parallel.hpp"
#include "parafree/rescale.hpp"

using namespace parafree;

namespace {

par::Mode mode_of(const benchmark::State& state) {
    return state.range(0) != 0 ? par::Mode::Omp : par::Mode::Serial;
}

struct SolvedFixture {
    Operator op = make_pucci_plus(1, 1.0, 2.0);
    Grid grid;
    Field data;
    FreeBoundarySolution sol;

    SolvedFixture() {
        grid = make_grid(1, 257, 1.0, -0.0625, 0.0);
        const double e[2] = {1.0, 0.0};
        data = make_halfspace_field(grid, op, e);
        sol = solve_free_boundary(op, data, FreeBoundaryParams{});
    }
};

const SolvedFixture& solved() {
    static const SolvedFixture f;
    return f;
}

void bm_solve(benchmark::State& state) {
    const Operator op = make_pucci_plus(1, 1.0, 2.0);
    const Grid g = make_grid(1, 129, 1.0, -0.0625, 0.0);
    const double e[2] = {1.0, 0.0};
    const Field data = make_halfspace_field(g, op, e);
    const FreeBoundaryParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_free_boundary(op, data, params, mode_of(state)));
    }
}

void bm_verify(benchmark::State& state) {
    const SolvedFixture& f = solved();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            verify_solution(f.op, f.sol.u, f.sol.omega, -1.0, mode_of(state)));
    }
}

void bm_rescale(benchmark::State& state) {
    const SolvedFixture& f = solved();
    const Grid ref = make_grid(1, 129, 1.0, -0.5, 0.0);
    const double x0[2] = {0.0, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rescale_field(f.sol.u, x0, -0.015625, 0.125, ref, mode_of(state)));
    }
}

void bm_max_abs(benchmark::State& state) {
    const SolvedFixture& f = solved();
    for (auto _ : state) {
        benchmark::DoNotOptimize(par::max_abs(mode_of(state), f.sol.u.data));
    }
}

void bm_sum(benchmark::State& state) {
    const SolvedFixture& f = solved();
    for (auto _ : state) {
        benchmark::DoNotOptimize(par::sum(mode_of(state), f.sol.u.data));
    }
}

}  // namespace

BENCHMARK(bm_solve)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_verify)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_rescale)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_max_abs)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_sum)->ArgName("omp")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
