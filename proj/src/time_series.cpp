#include "scalesep/time_series.hpp"

#include <cmath>
#include <string>

#include "scalesep/error.hpp"

namespace scalesep {

TimeSeries::TimeSeries(double t0, double dt, Eigen::MatrixXd values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
  if (!std::isfinite(t0_)) throw Error(ErrorKind::InvalidArgument, "t0 must be finite");
  if (!(dt_ > 0.0) || !std::isfinite(dt_))
    throw Error(ErrorKind::InvalidStep, "dt must be positive, got " + std::to_string(dt_));
  if (values_.rows() < 1) throw Error(ErrorKind::InvalidArgument, "time series needs at least one channel");
  if (values_.cols() < 2)
    throw Error(ErrorKind::TooFewSamples,
                "time series needs at least 2 samples, got " + std::to_string(values_.cols()));
}

std::vector<double> TimeSeries::times() const {
  std::vector<double> t(static_cast<std::size_t>(samples()));
  for (Index k = 0; k < samples(); ++k) t[static_cast<std::size_t>(k)] = time(k);
  return t;
}

bool TimeSeries::operator==(const TimeSeries& other) const {
  return t0_ == other.t0_ && dt_ == other.dt_ && values_.rows() == other.values_.rows() &&
         values_.cols() == other.values_.cols() && values_ == other.values_;
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonUniformGrid: return "NonUniformGrid";
    case ErrorKind::MalformedNumber: return "MalformedNumber";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ColumnOutOfRange: return "ColumnOutOfRange";
    case ErrorKind::EmptyGauge: return "EmptyGauge";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::TooFewColumns: return "TooFewColumns";
    case ErrorKind::InvalidPolicyParameter: return "InvalidPolicyParameter";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::RankTooLarge: return "RankTooLarge";
    case ErrorKind::InvalidSpan: return "InvalidSpan";
    case ErrorKind::InvalidStep: return "InvalidStep";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularTruncation: return "SingularTruncation";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::NumericOverflow: return "NumericOverflow";
  }
  return "Unknown";
}

bool is_numeric(ErrorKind kind) noexcept {
  return kind == ErrorKind::SingularTruncation || kind == ErrorKind::EigenFailure ||
         kind == ErrorKind::NumericOverflow;
}

}  // namespace scalesep
