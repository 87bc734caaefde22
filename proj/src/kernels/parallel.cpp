#include <algorithm>
#include <complex>

#include "scalesep/kernels.hpp"

#if defined(SCALESEP_HAVE_OPENMP) && defined(_OPENMP)
#include <omp.h>
#define SCALESEP_OMP(x) _Pragma(#x)
#else
#define SCALESEP_OMP(x)
#endif

namespace scalesep::kernels::parallel {

Eigen::MatrixXcd mode_sum(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& weights,
                          const Eigen::VectorXcd& rates, std::span<const double> offsets) {
  const Index rows = modes.rows();
  const Index n_modes = modes.cols();
  const auto cols = static_cast<Index>(offsets.size());

  // Per-column mode factors, then one GEMM per fixed-width column chunk.
  Eigen::MatrixXcd factors(n_modes, cols);
  SCALESEP_OMP(omp parallel for schedule(static))
  for (Index k = 0; k < cols; ++k) {
    for (Index j = 0; j < n_modes; ++j) {
      factors(j, k) = weights(j) * std::exp(rates(j) * offsets[static_cast<std::size_t>(k)]);
    }
  }

  Eigen::MatrixXcd out(rows, cols);
  const Index chunks = (cols + kColumnChunk - 1) / kColumnChunk;
  SCALESEP_OMP(omp parallel for schedule(static))
  for (Index chunk = 0; chunk < chunks; ++chunk) {
    const Index first = chunk * kColumnChunk;
    const Index width = std::min(kColumnChunk, cols - first);
    out.middleCols(first, width).noalias() = modes * factors.middleCols(first, width);
  }
  return out;
}

Eigen::MatrixXd hankel(const Eigen::MatrixXd& values, Index n_delays) {
  const Index channels = values.rows();
  const Index cols = values.cols() - n_delays + 1;
  Eigen::MatrixXd out(channels * n_delays, cols);
  SCALESEP_OMP(omp parallel for schedule(static))
  for (Index j = 0; j < cols; ++j) {
    for (Index c = 0; c < channels; ++c) {
      out.col(j).segment(c * n_delays, n_delays) = values.row(c).segment(j, n_delays).transpose();
    }
  }
  return out;
}

Eigen::MatrixXcd antidiagonal_mean(const Eigen::MatrixXcd& h, Index channels, Index n_delays) {
  const Index cols = h.cols();
  const Index samples = n_delays + cols - 1;
  Eigen::MatrixXcd out(channels, samples);
  const Index total = channels * samples;
  SCALESEP_OMP(omp parallel for schedule(static))
  for (Index flat = 0; flat < total; ++flat) {
    const Index c = flat / samples;
    const Index k = flat % samples;
    const Index i_lo = std::max<Index>(0, k - (cols - 1));
    const Index i_hi = std::min<Index>(n_delays - 1, k);
    std::complex<double> sum{0.0, 0.0};
    for (Index i = i_lo; i <= i_hi; ++i) sum += h(c * n_delays + i, k - i);
    out(c, k) = sum / static_cast<double>(i_hi - i_lo + 1);
  }
  return out;
}

}  // namespace scalesep::kernels::parallel
