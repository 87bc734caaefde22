#include "scalesep/embedding.hpp"

#include <cmath>
#include <string>

#include "scalesep/error.hpp"
#include "scalesep/log.hpp"

namespace scalesep::embedding {

HankelEmbedding build_hankel(const TimeSeries& series, Index n_delays, kernels::Backend backend) {
  if (n_delays < 1) throw Error(ErrorKind::InvalidArgument, "n_delays must be >= 1");
  const Index n = series.samples();
  if (n - n_delays + 1 < 2) {
    throw Error(ErrorKind::TooFewSamples, std::to_string(n_delays) + " delays need at least " +
                                              std::to_string(n_delays + 1) + " samples, series has " +
                                              std::to_string(n));
  }
  HankelEmbedding h;
  h.n_delays = n_delays;
  h.channels = series.channels();
  h.t0 = series.t0();
  h.dt = series.dt();
  h.matrix = kernels::hankel(series.values(), n_delays, backend);
  h.singular_values = Eigen::BDCSVD<Eigen::MatrixXd>(h.matrix).singularValues();
  return h;
}

Index choose_rank(const Eigen::VectorXd& sv, const RankPolicy& policy) {
  const Index count = sv.size();
  if (count == 0) throw Error(ErrorKind::ShapeMismatch, "empty singular spectrum");
  return std::visit(
      [&](const auto& p) -> Index {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, Fixed>) {
          if (p.rank < 1) throw Error(ErrorKind::InvalidPolicyParameter, "fixed rank must be >= 1");
          if (p.rank > count) {
            log::warn("requested rank " + std::to_string(p.rank) + " exceeds the " + std::to_string(count) +
                      " available singular values; clamping");
            return count;
          }
          return p.rank;
        } else if constexpr (std::is_same_v<P, RelativeCutoff>) {
          if (!(p.tau > 0.0 && p.tau <= 1.0)) {
            throw Error(ErrorKind::InvalidPolicyParameter, "relative cutoff must lie in (0, 1]");
          }
          Index r = 0;
          while (r < count && sv(r) >= p.tau * sv(0)) ++r;
          return std::max<Index>(r, 1);
        } else {
          if (!(p.eta > 0.0 && p.eta <= 1.0)) {
            throw Error(ErrorKind::InvalidPolicyParameter, "energy fraction must lie in (0, 1]");
          }
          const double total = sv.squaredNorm();
          double acc = 0.0;
          for (Index r = 0; r < count; ++r) {
            acc += sv(r) * sv(r);
            if (acc >= p.eta * total) return r + 1;
          }
          return count;
        }
      },
      policy);
}

double truncation_residual(const Eigen::VectorXd& sv, Index r) {
  double acc = 0.0;
  // Sum smallest first.
  for (Index j = sv.size() - 1; j >= std::max<Index>(r, 0); --j) acc += sv(j) * sv(j);
  return std::sqrt(acc);
}

Eigen::MatrixXcd deembed(const Eigen::MatrixXcd& embedded, Index channels, Index n_delays, DeembedMode mode,
                         kernels::Backend backend) {
  if (channels < 1 || n_delays < 1 || embedded.rows() != channels * n_delays || embedded.cols() < 1) {
    throw Error(ErrorKind::ShapeMismatch, "embedded matrix is " + std::to_string(embedded.rows()) + "x" +
                                              std::to_string(embedded.cols()) + ", expected " +
                                              std::to_string(channels) + "*" + std::to_string(n_delays) + " rows");
  }
  if (mode == DeembedMode::antidiagonal_average) {
    return kernels::antidiagonal_mean(embedded, channels, n_delays, backend);
  }
  const Index cols = embedded.cols();
  Eigen::MatrixXcd out(channels, n_delays + cols - 1);
  for (Index c = 0; c < channels; ++c) {
    out.row(c).head(cols) = embedded.row(c * n_delays);
    out.row(c).tail(n_delays - 1) = embedded.col(cols - 1).segment(c * n_delays + 1, n_delays - 1).transpose();
  }
  return out;
}

}  // namespace scalesep::embedding
