#pragma once

#include <Eigen/Dense>
#include <vector>

namespace scalesep {

using Index = Eigen::Index;

/// Uniformly sampled multichannel trajectory. values() is channels x samples;
/// sample k sits at t0 + k*dt for every channel.
class TimeSeries {
 public:
  TimeSeries(double t0, double dt, Eigen::MatrixXd values);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  Index channels() const noexcept { return values_.rows(); }
  Index samples() const noexcept { return values_.cols(); }

  double time(Index k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
  double t_end() const noexcept { return time(samples() - 1); }
  std::vector<double> times() const;

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(Index channel, Index k) const { return values_(channel, k); }

  /// Bitwise comparison of grid and samples.
  bool operator==(const TimeSeries& other) const;

 private:
  double t0_;
  double dt_;
  Eigen::MatrixXd values_;
};

}  // namespace scalesep
