#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference and an
// OpenMP version; the OpenMP versions partition work into fixed chunks that
// do not depend on the thread count, so their output is bitwise identical
// for any OMP_NUM_THREADS.

#include <Eigen/Dense>
#include <span>

namespace scalesep::kernels {

using Index = Eigen::Index;

enum class Backend { serial, parallel };

/// parallel when built with OpenMP, serial otherwise.
Backend default_backend() noexcept;
int max_threads() noexcept;
void set_threads(int n) noexcept;

// out(:, k) = sum_j modes(:, j) * weights(j) * exp(rates(j) * offsets[k]), j ascending.
Eigen::MatrixXcd mode_sum(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& weights,
                          const Eigen::VectorXcd& rates, std::span<const double> offsets,
                          Backend backend = default_backend());

// Stacked delay blocks: out(c*n_delays + i, j) = values(c, i + j).
Eigen::MatrixXd hankel(const Eigen::MatrixXd& values, Index n_delays, Backend backend = default_backend());

// out(c, k) = mean of h(c*n_delays + i, j) over i + j == k.
Eigen::MatrixXcd antidiagonal_mean(const Eigen::MatrixXcd& h, Index channels, Index n_delays,
                                   Backend backend = default_backend());

namespace serial {
Eigen::MatrixXcd mode_sum(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& weights,
                          const Eigen::VectorXcd& rates, std::span<const double> offsets);
Eigen::MatrixXd hankel(const Eigen::MatrixXd& values, Index n_delays);
Eigen::MatrixXcd antidiagonal_mean(const Eigen::MatrixXcd& h, Index channels, Index n_delays);
}  // namespace serial

namespace parallel {
/// Columns per work chunk in mode_sum.
inline constexpr Index kColumnChunk = 64;

Eigen::MatrixXcd mode_sum(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& weights,
                          const Eigen::VectorXcd& rates, std::span<const double> offsets);
Eigen::MatrixXd hankel(const Eigen::MatrixXd& values, Index n_delays);
Eigen::MatrixXcd antidiagonal_mean(const Eigen::MatrixXcd& h, Index channels, Index n_delays);
}  // namespace parallel

}  // namespace scalesep::kernels
