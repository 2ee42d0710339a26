// serial vs OpenMP matvec, and a full RK4 step at network scale

#include <random>

#include <benchmark/benchmark.h>

#include "posync/linalg.hpp"

using namespace posync;

namespace {

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (double& v : m.data()) v = u(rng);
    return m;
}

Vector random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector x(n);
    for (double& v : x) v = u(rng);
    return x;
}

void bm_matvec_serial(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix m = random_matrix(n, 1);
    const Vector x = random_vector(n, 2);
    Vector y(n);
    for (auto _ : state) {
        matvec_serial(m, x.data(), y.data());
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n * n));
}

void bm_matvec_parallel(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix m = random_matrix(n, 1);
    const Vector x = random_vector(n, 2);
    Vector y(n);
    for (auto _ : state) {
        matvec_parallel(m, x.data(), y.data());
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n * n));
}

void bm_rk4_step(benchmark::State& state) {
    const std::size_t n = 300; // 150 two-state agents
    const Matrix m = random_matrix(n, 3) * 0.01;
    Vector x = random_vector(n, 4);
    Vector scratch(4 * n);
    const Kernel kernel = state.range(0) == 0 ? Kernel::Serial : Kernel::Parallel;
    for (auto _ : state) {
        rk4_step(m, 1e-3, x, scratch, kernel);
        benchmark::DoNotOptimize(x.data());
    }
}

} // namespace

BENCHMARK(bm_matvec_serial)->Arg(64)->Arg(300)->Arg(1024);
BENCHMARK(bm_matvec_parallel)->Arg(64)->Arg(300)->Arg(1024);
BENCHMARK(bm_rk4_step)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
