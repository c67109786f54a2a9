// Serial reference kernels against their OpenMP versions. The second
// benchmark argument is the thread cap (0 = runtime default).

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gspkit/jacobi.hpp"
#include "gspkit/kernels.hpp"

using namespace gspkit;

namespace {

// Random sparse symmetric operator with about `degree` nonzeros per row.
Matrix sparse_operator(Index n, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  Matrix s = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (int k = 0; k < degree / 2; ++k) {
      const Index j = pick(rng);
      if (j == i) continue;
      s(i, j) = s(j, i) = w(rng);
    }
  return s / static_cast<double>(degree);
}

Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = z(rng);
  return v;
}

const std::vector<double> kTaps = {1.0, -0.5, 0.25, -0.125, 0.0625, -0.03125, 0.015625, -0.0078125};

template <bool Parallel>
void BM_PolyApply(benchmark::State& state) {
  const Index n = state.range(0);
  kernels::set_max_threads(static_cast<int>(state.range(1)));
  const auto s = kernels::CsrMatrix::from_dense(sparse_operator(n, 16, 1));
  const Vector x = random_vector(n, 2);
  Vector y(n);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::poly_apply(s, kTaps, {x.data(), static_cast<std::size_t>(n)}, {y.data(), static_cast<std::size_t>(n)});
    else
      kernels::poly_apply_serial(s, kTaps, {x.data(), static_cast<std::size_t>(n)}, {y.data(), static_cast<std::size_t>(n)});
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * s.nnz() * static_cast<std::int64_t>(kTaps.size()));
  kernels::set_max_threads(0);
}

template <bool Parallel>
void BM_PolyApplyBatch(benchmark::State& state) {
  const Index n = state.range(0);
  kernels::set_max_threads(static_cast<int>(state.range(1)));
  const auto s = kernels::CsrMatrix::from_dense(sparse_operator(n, 16, 3));
  Matrix x(n, 32);
  for (Index c = 0; c < x.cols(); ++c) x.col(c) = random_vector(n, 10 + c);
  for (auto _ : state) {
    Matrix y = Parallel ? kernels::poly_apply_batch(s, kTaps, x) : kernels::poly_apply_batch_serial(s, kTaps, x);
    benchmark::DoNotOptimize(y.data());
  }
  kernels::set_max_threads(0);
}

template <bool Parallel>
void BM_Chebyshev(benchmark::State& state) {
  const Index n = state.range(0);
  kernels::set_max_threads(static_cast<int>(state.range(1)));
  const auto s = kernels::CsrMatrix::from_dense(sparse_operator(n, 16, 4));
  const std::vector<double> coeffs(30, 0.1);
  const Vector x = random_vector(n, 5);
  Vector y(n);
  const std::span<const double> in{x.data(), static_cast<std::size_t>(n)};
  const std::span<double> out{y.data(), static_cast<std::size_t>(n)};
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::chebyshev_apply(s, coeffs, -1.0, 1.0, in, out);
    else
      kernels::chebyshev_apply_serial(s, coeffs, -1.0, 1.0, in, out);
    benchmark::DoNotOptimize(y.data());
  }
  kernels::set_max_threads(0);
}

template <bool Parallel>
void BM_Jacobi(benchmark::State& state) {
  const Index n = state.range(0);
  kernels::set_max_threads(static_cast<int>(state.range(1)));
  std::mt19937_64 rng(6);
  std::normal_distribution<double> z;
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = z(rng);
  a = 0.5 * (a + a.transpose());
  for (auto _ : state) {
    SymmetricEigen e = Parallel ? jacobi_eigen(a) : jacobi_eigen_serial(a);
    benchmark::DoNotOptimize(e.values.data());
  }
  kernels::set_max_threads(0);
}

void serial_args(benchmark::internal::Benchmark* b, std::initializer_list<int64_t> sizes) {
  for (auto n : sizes) b->Args({n, 1});
}

void parallel_args(benchmark::internal::Benchmark* b, std::initializer_list<int64_t> sizes) {
  for (auto n : sizes)
    for (int64_t t : {1, 2, 4, 0}) b->Args({n, t});
}

}  // namespace

BENCHMARK(BM_PolyApply<false>)->Apply([](auto* b) { serial_args(b, {1000, 4000, 16000}); });
BENCHMARK(BM_PolyApply<true>)->Apply([](auto* b) { parallel_args(b, {1000, 4000, 16000}); })->UseRealTime();
BENCHMARK(BM_PolyApplyBatch<false>)->Apply([](auto* b) { serial_args(b, {1000, 4000}); });
BENCHMARK(BM_PolyApplyBatch<true>)->Apply([](auto* b) { parallel_args(b, {1000, 4000}); })->UseRealTime();
BENCHMARK(BM_Chebyshev<false>)->Apply([](auto* b) { serial_args(b, {1000, 4000, 16000}); });
BENCHMARK(BM_Chebyshev<true>)->Apply([](auto* b) { parallel_args(b, {1000, 4000, 16000}); })->UseRealTime();
BENCHMARK(BM_Jacobi<false>)->Apply([](auto* b) { serial_args(b, {64, 128, 256}); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Jacobi<true>)->Apply([](auto* b) { parallel_args(b, {64, 128, 256}); })->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
