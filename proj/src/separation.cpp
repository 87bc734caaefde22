#include "scalesep/separation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scalesep/error.hpp"
#include "scalesep/log.hpp"

namespace scalesep::separation {

ModePartition classify_modes(const dmd::DmdModel& model, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  const Index r = model.rank;
  ModePartition out;
  if (r == 0) return out;

  Eigen::VectorXd speed = model.frequencies.cwiseAbs();
  const double max_speed = speed.maxCoeff();
  const double min_speed = speed.minCoeff();
  std::vector<bool> slow(static_cast<std::size_t>(r), false);
  if (max_speed == 0.0 || min_speed >= (1.0 - 1e-6) * max_speed) {
    std::fill(slow.begin(), slow.end(), true);
  } else {
    const double threshold = epsilon * max_speed;
    const auto partner = dmd::conjugate_partners(model);
    for (Index j = 0; j < r; ++j) {
      const Index p = partner[static_cast<std::size_t>(j)];
      const double s = p >= 0 ? std::min(speed(j), speed(p)) : speed(j);
      slow[static_cast<std::size_t>(j)] = s <= threshold;
    }
  }
  for (Index j = 0; j < r; ++j) (slow[static_cast<std::size_t>(j)] ? out.slow : out.fast).push_back(j);
  return out;
}

Eigen::MatrixXcd lowrank_component(const dmd::DmdModel& model, std::span<const Index> slow,
                                   std::span<const double> times) {
  return dmd::evaluate(model, slow, times);
}

Eigen::MatrixXd sparse_component(const dmd::DmdModel& model, std::span<const Index> slow,
                                 std::span<const double> times, SparseMethod method, const Eigen::MatrixXd& data) {
  if (method == SparseMethod::residual) {
    if (data.rows() != model.rows() || data.cols() != static_cast<Index>(times.size())) {
      throw Error(ErrorKind::ShapeMismatch, "residual sparse component needs data of shape " +
                                                std::to_string(model.rows()) + "x" + std::to_string(times.size()));
    }
    return data - lowrank_component(model, slow, times).cwiseAbs();
  }
  std::vector<Index> fast;
  for (Index j = 0; j < model.rank; ++j) {
    if (std::find(slow.begin(), slow.end(), j) == slow.end()) fast.push_back(j);
  }
  return dmd::evaluate(model, fast, times).real();
}

Eigen::MatrixXd component_derivative(const dmd::DmdModel& model, std::span<const Index> indices,
                                     std::span<const double> times) {
  return dmd::evaluate(model, indices, times, true).real();
}

TimeSeries finite_difference_derivative(const TimeSeries& series) {
  const Index n = series.samples();
  if (n < 3) throw Error(ErrorKind::TooFewSamples, "finite differences need at least 3 samples");
  const double inv2h = 1.0 / (2.0 * series.dt());
  const Eigen::MatrixXd& y = series.values();
  Eigen::MatrixXd d(y.rows(), n);
  d.col(0) = (-3.0 * y.col(0) + 4.0 * y.col(1) - y.col(2)) * inv2h;
  for (Index k = 1; k + 1 < n; ++k) d.col(k) = (y.col(k + 1) - y.col(k - 1)) * inv2h;
  d.col(n - 1) = (3.0 * y.col(n - 1) - 4.0 * y.col(n - 2) + y.col(n - 3)) * inv2h;
  return TimeSeries(series.t0(), series.dt(), std::move(d));
}

std::vector<double> column_times(const embedding::HankelEmbedding& h) {
  std::vector<double> t(static_cast<std::size_t>(h.columns()));
  for (Index j = 0; j < h.columns(); ++j) t[static_cast<std::size_t>(j)] = h.column_time(j);
  return t;
}

ScaleSplit separate(const dmd::DmdModel& model, const embedding::HankelEmbedding& h, const SplitOptions& options) {
  if (model.rows() != h.rows()) throw Error(ErrorKind::ShapeMismatch, "model and embedding row counts differ");
  const ModePartition part = classify_modes(model, options.epsilon);
  const auto times = column_times(h);

  const auto to_series = [&](const Eigen::MatrixXcd& embedded) {
    return TimeSeries(h.t0, h.dt, embedding::deembed(embedded, h.channels, h.n_delays, options.deembed).real());
  };

  const Eigen::MatrixXcd lowrank = lowrank_component(model, part.slow, times);
  const Eigen::MatrixXd sparse = sparse_component(model, part.slow, times, options.sparse, h.matrix);

  if (options.sparse == SparseMethod::residual) {
    if (options.derivative == DerivativeMethod::modal) {
      log::warn("residual sparse component is not a modal sum; using finite-difference derivatives");
    }
    TimeSeries slow = to_series(lowrank.cwiseAbs().cast<std::complex<double>>());
    TimeSeries fast = to_series(sparse.cast<std::complex<double>>());
    TimeSeries ds = finite_difference_derivative(slow);
    TimeSeries df = finite_difference_derivative(fast);
    return {part.slow, part.fast, options.epsilon, options.sparse, std::move(slow), std::move(fast), std::move(ds),
            std::move(df)};
  }

  TimeSeries slow = to_series(lowrank);
  TimeSeries fast = to_series(sparse.cast<std::complex<double>>());
  if (options.derivative == DerivativeMethod::finite_difference) {
    TimeSeries ds = finite_difference_derivative(slow);
    TimeSeries df = finite_difference_derivative(fast);
    return {part.slow, part.fast, options.epsilon, options.sparse, std::move(slow), std::move(fast), std::move(ds),
            std::move(df)};
  }
  TimeSeries ds = to_series(component_derivative(model, part.slow, times).cast<std::complex<double>>());
  TimeSeries df = to_series(component_derivative(model, part.fast, times).cast<std::complex<double>>());
  return {part.slow, part.fast, options.epsilon, options.sparse, std::move(slow), std::move(fast), std::move(ds),
          std::move(df)};
}

}  // namespace scalesep::separation
