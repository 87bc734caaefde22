#include <complex>

#include "scalesep/kernels.hpp"

namespace scalesep::kernels::serial {

Eigen::MatrixXcd mode_sum(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& weights,
                          const Eigen::VectorXcd& rates, std::span<const double> offsets) {
  const Index rows = modes.rows();
  const Index n_modes = modes.cols();
  const auto cols = static_cast<Index>(offsets.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, cols);
  for (Index k = 0; k < cols; ++k) {
    for (Index j = 0; j < n_modes; ++j) {
      const std::complex<double> w = weights(j) * std::exp(rates(j) * offsets[static_cast<std::size_t>(k)]);
      for (Index r = 0; r < rows; ++r) out(r, k) += modes(r, j) * w;
    }
  }
  return out;
}

Eigen::MatrixXd hankel(const Eigen::MatrixXd& values, Index n_delays) {
  const Index channels = values.rows();
  const Index cols = values.cols() - n_delays + 1;
  Eigen::MatrixXd out(channels * n_delays, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index c = 0; c < channels; ++c) {
      for (Index i = 0; i < n_delays; ++i) out(c * n_delays + i, j) = values(c, i + j);
    }
  }
  return out;
}

Eigen::MatrixXcd antidiagonal_mean(const Eigen::MatrixXcd& h, Index channels, Index n_delays) {
  const Index cols = h.cols();
  const Index samples = n_delays + cols - 1;
  Eigen::MatrixXcd out(channels, samples);
  for (Index c = 0; c < channels; ++c) {
    for (Index k = 0; k < samples; ++k) {
      const Index i_lo = std::max<Index>(0, k - (cols - 1));
      const Index i_hi = std::min<Index>(n_delays - 1, k);
      std::complex<double> sum{0.0, 0.0};
      for (Index i = i_lo; i <= i_hi; ++i) sum += h(c * n_delays + i, k - i);
      out(c, k) = sum / static_cast<double>(i_hi - i_lo + 1);
    }
  }
  return out;
}

}  // namespace scalesep::kernels::serial
