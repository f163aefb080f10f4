#include <benchmark/benchmark.h>

#include "fracctl/control.hpp"
#include "fracctl/pde_solvers.hpp"
#include "fracctl/verify.hpp"

using namespace fracctl;

namespace {

ControlField varying_control(const Grid& grid) {
    ControlField v(grid);
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        for (Eigen::Index r = 0; r < v.rows(); ++r) v.values()(r, c) = 0.5 * std::sin(0.1 * double(r + 3 * c));
    }
    return v;
}

void BM_OperatorDense(benchmark::State& state) {
    const Grid grid = Grid::full_window(-1.0, 1.0, static_cast<std::size_t>(state.range(0)), 1.0, 1);
    const FractionalOperator op(grid, 0.5);
    const Vector u = Vector::Ones(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(op.apply(u));
}
BENCHMARK(BM_OperatorDense)->Arg(127)->Arg(255)->Arg(511);

void BM_OperatorToeplitz(benchmark::State& state) {
    const Grid grid = Grid::full_window(-1.0, 1.0, static_cast<std::size_t>(state.range(0)), 1.0, 1);
    const FractionalOperator op(grid, 0.5);
    const Vector u = Vector::Ones(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(op.apply_toeplitz(u));
}
BENCHMARK(BM_OperatorToeplitz)->Arg(127)->Arg(255)->Arg(511);

void BM_StateSolve(benchmark::State& state) {
    const Problem problem(benchmark_spec(static_cast<std::size_t>(state.range(0)), 200));
    const ControlField v = varying_control(problem.grid());
    SolverOptions options;
    options.linear_solver = state.range(1) == 0 ? LinearSolver::cholesky : LinearSolver::toeplitz_cg;
    for (auto _ : state) benchmark::DoNotOptimize(solve_state(problem, v, options));
    state.SetLabel(state.range(1) == 0 ? "cholesky" : "toeplitz_cg");
}
BENCHMARK(BM_StateSolve)->Args({63, 0})->Args({63, 1})->Args({127, 0})->Args({127, 1})->Unit(benchmark::kMillisecond);

void BM_StateSolveTimeConstant(benchmark::State& state) {
    const Problem problem(benchmark_spec(static_cast<std::size_t>(state.range(0)), 200));
    const ControlField v = ControlField::constant(problem.grid(), 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(solve_state(problem, v));
}
BENCHMARK(BM_StateSolveTimeConstant)->Arg(127)->Arg(255)->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& state) {
    const Problem problem(benchmark_spec(static_cast<std::size_t>(state.range(0)), 200));
    const ControlField v = varying_control(problem.grid());
    for (auto _ : state) benchmark::DoNotOptimize(gradient(problem, v));
}
BENCHMARK(BM_Gradient)->Arg(63)->Arg(127)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
