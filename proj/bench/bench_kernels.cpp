// Serial reference vs OpenMP kernels at the sizes the experiments use.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "scalesep/kernels.hpp"

namespace {

using namespace scalesep;

struct ModeSumCase {
  Eigen::MatrixXcd modes;
  Eigen::VectorXcd weights;
  Eigen::VectorXcd rates;
  std::vector<double> offsets;
};

ModeSumCase make_case(Eigen::Index rows, Eigen::Index rank, Eigen::Index cols) {
  std::mt19937 gen(7);
  std::normal_distribution<double> n(0.0, 1.0);
  ModeSumCase c;
  c.modes = Eigen::MatrixXcd::NullaryExpr(rows, rank, [&] { return std::complex<double>(n(gen), n(gen)); });
  c.weights = Eigen::VectorXcd::NullaryExpr(rank, [&] { return std::complex<double>(n(gen), n(gen)); });
  c.rates = Eigen::VectorXcd::NullaryExpr(rank, [&] { return std::complex<double>(-0.01 * std::abs(n(gen)), 10 * n(gen)); });
  for (Eigen::Index k = 0; k < cols; ++k) c.offsets.push_back(0.01 * static_cast<double>(k));
  return c;
}

template <kernels::Backend B>
void BM_ModeSum(benchmark::State& state) {
  const auto c = make_case(state.range(0), state.range(1), state.range(2));
  for (auto _ : state) {
    auto out = kernels::mode_sum(c.modes, c.weights, c.rates, c.offsets, B);
    benchmark::DoNotOptimize(out.data());
  }
}

template <kernels::Backend B>
void BM_Hankel(benchmark::State& state) {
  const Eigen::MatrixXd values = Eigen::MatrixXd::Random(state.range(0), state.range(1));
  for (auto _ : state) {
    auto out = kernels::hankel(values, state.range(2), B);
    benchmark::DoNotOptimize(out.data());
  }
}

template <kernels::Backend B>
void BM_Antidiagonal(benchmark::State& state) {
  const Eigen::Index channels = state.range(0);
  const Eigen::Index delays = state.range(1);
  const Eigen::MatrixXcd h = Eigen::MatrixXcd::Random(channels * delays, state.range(2));
  for (auto _ : state) {
    auto out = kernels::antidiagonal_mean(h, channels, delays, B);
    benchmark::DoNotOptimize(out.data());
  }
}

// toy: 300 rows, 20 modes, 958 columns; gauges: 1500 rows, 75 modes, 851 columns
BENCHMARK_TEMPLATE(BM_ModeSum, kernels::Backend::serial)->Args({300, 20, 958})->Args({1500, 75, 851});
BENCHMARK_TEMPLATE(BM_ModeSum, kernels::Backend::parallel)->Args({300, 20, 958})->Args({1500, 75, 851});
BENCHMARK_TEMPLATE(BM_Hankel, kernels::Backend::serial)->Args({1, 1257, 300})->Args({10, 1000, 150});
BENCHMARK_TEMPLATE(BM_Hankel, kernels::Backend::parallel)->Args({1, 1257, 300})->Args({10, 1000, 150});
BENCHMARK_TEMPLATE(BM_Antidiagonal, kernels::Backend::serial)->Args({1, 300, 958})->Args({10, 150, 851});
BENCHMARK_TEMPLATE(BM_Antidiagonal, kernels::Backend::parallel)->Args({1, 300, 958})->Args({10, 150, 851});

}  // namespace

BENCHMARK_MAIN();
