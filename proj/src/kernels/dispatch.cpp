#include "scalesep/kernels.hpp"

#if defined(SCALESEP_HAVE_OPENMP) && defined(_OPENMP)
#include <omp.h>
#endif

namespace scalesep::kernels {

Backend default_backend() noexcept {
#if defined(SCALESEP_HAVE_OPENMP) && defined(_OPENMP)
  return Backend::parallel;
#else
  return Backend::serial;
#endif
}

int max_threads() noexcept {
#if defined(SCALESEP_HAVE_OPENMP) && defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads([[maybe_unused]] int n) noexcept {
#if defined(SCALESEP_HAVE_OPENMP) && defined(_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#endif
}

Eigen::MatrixXcd mode_sum(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& weights,
                          const Eigen::VectorXcd& rates, std::span<const double> offsets, Backend backend) {
  return backend == Backend::parallel ? parallel::mode_sum(modes, weights, rates, offsets)
                                      : serial::mode_sum(modes, weights, rates, offsets);
}

Eigen::MatrixXd hankel(const Eigen::MatrixXd& values, Index n_delays, Backend backend) {
  return backend == Backend::parallel ? parallel::hankel(values, n_delays) : serial::hankel(values, n_delays);
}

Eigen::MatrixXcd antidiagonal_mean(const Eigen::MatrixXcd& h, Index channels, Index n_delays, Backend backend) {
  return backend == Backend::parallel ? parallel::antidiagonal_mean(h, channels, n_delays)
                                      : serial::antidiagonal_mean(h, channels, n_delays);
}

}  // namespace scalesep::kernels
