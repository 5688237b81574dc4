// Throughput comparison of the serial reference kernels against their
// OpenMP counterparts. The pairs are bit-identical by contract (the tests
// assert that); this target answers the remaining question, which one to
// dispatch to at which problem size.
//
//   cmake --build build --target bench_kernels
//   ./build/bench/bench_kernels

#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fedkm/kernels.hpp"

namespace {

std::vector<double> random_values(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> out(count);
    for (double& v : out) v = u(rng);
    return out;
}

struct AssignProblem {
    int n, d, k;
    std::vector<double> pts, means;
    std::vector<int> idx;
    std::vector<double> d2;

    AssignProblem(int n_, int d_, int k_)
        : n(n_), d(d_), k(k_),
          pts(random_values(static_cast<std::size_t>(n_) * d_, 1)),
          means(random_values(static_cast<std::size_t>(k_) * d_, 2)),
          idx(static_cast<std::size_t>(n_)), d2(static_cast<std::size_t>(n_)) {}
};

template <auto Kernel> void assign_bench(benchmark::State& state) {
    AssignProblem p(static_cast<int>(state.range(0)),
                    static_cast<int>(state.range(1)),
                    static_cast<int>(state.range(2)));
    for (auto _ : state) {
        Kernel(p.pts.data(), p.n, p.d, p.means.data(), p.k, p.idx.data(),
               p.d2.data());
        benchmark::DoNotOptimize(p.idx.data());
        benchmark::DoNotOptimize(p.d2.data());
    }
    state.SetItemsProcessed(state.iterations() * p.n);
}

struct SilhouetteProblem {
    int n, d, m;
    std::vector<double> pts;
    std::vector<int> labels;
    std::vector<std::int64_t> counts;
    std::vector<double> scores;

    SilhouetteProblem(int n_, int d_, int m_)
        : n(n_), d(d_), m(m_),
          pts(random_values(static_cast<std::size_t>(n_) * d_, 3)),
          labels(static_cast<std::size_t>(n_)),
          counts(static_cast<std::size_t>(m_), 0),
          scores(static_cast<std::size_t>(n_)) {
        std::mt19937_64 rng(4);
        std::uniform_int_distribution<int> pick(0, m_ - 1);
        for (int i = 0; i < n_; ++i) {
            labels[static_cast<std::size_t>(i)] = pick(rng);
            ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        }
    }
};

template <auto Kernel> void silhouette_bench(benchmark::State& state) {
    SilhouetteProblem p(static_cast<int>(state.range(0)),
                        static_cast<int>(state.range(1)),
                        static_cast<int>(state.range(2)));
    for (auto _ : state) {
        Kernel(p.pts.data(), p.n, p.d, p.labels.data(), p.m, p.counts.data(),
               p.scores.data());
        benchmark::DoNotOptimize(p.scores.data());
    }
    state.SetItemsProcessed(state.iterations() * p.n);
}

// {n, d, k}: a small-federation shard, a pooled grid dataset, and the
// high-dimensional shape from the runtime check
void assign_sizes(benchmark::internal::Benchmark* b) {
    b->Args({200, 2, 16})->Args({10000, 2, 16})->Args({100000, 16, 32})->Args({1100, 784, 60});
}

// {n, d, m}: silhouette is O(n^2 d), so n stays modest
void silhouette_sizes(benchmark::internal::Benchmark* b) {
    b->Args({500, 2, 16})->Args({2000, 2, 16})->Args({2000, 32, 16});
}

BENCHMARK(assign_bench<fedkm::kernels::assign_serial>)
    ->Name("assign/serial")->Apply(assign_sizes);
BENCHMARK(assign_bench<fedkm::kernels::assign_omp>)
    ->Name("assign/omp")->Apply(assign_sizes);
BENCHMARK(silhouette_bench<fedkm::kernels::silhouette_samples_serial>)
    ->Name("silhouette/serial")->Apply(silhouette_sizes);
BENCHMARK(silhouette_bench<fedkm::kernels::silhouette_samples_omp>)
    ->Name("silhouette/omp")->Apply(silhouette_sizes);

} // namespace

BENCHMARK_MAIN();
