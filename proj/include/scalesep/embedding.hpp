#pragma once

#include <variant>

#include "scalesep/kernels.hpp"
#include "scalesep/time_series.hpp"

namespace scalesep::embedding {

/// Delay embedding of a (multichannel) series. Channel c occupies rows
/// [c*n_delays, (c+1)*n_delays); column j is the snapshot starting at
/// sample j, so matrix(c*N + i, j) = values(c, i + j).
struct HankelEmbedding {
  Index n_delays = 0;
  Index channels = 0;
  double t0 = 0.0;
  double dt = 0.0;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd singular_values;  // nonincreasing, length min(rows, cols)

  Index rows() const noexcept { return matrix.rows(); }
  Index columns() const noexcept { return matrix.cols(); }
  Index samples() const noexcept { return n_delays + columns() - 1; }
  /// Time of snapshot j, i.e. of its first delay row.
  double column_time(Index j) const noexcept { return t0 + static_cast<double>(j) * dt; }
};

HankelEmbedding build_hankel(const TimeSeries& series, Index n_delays,
                             kernels::Backend backend = kernels::default_backend());

struct Fixed {
  Index rank;
};
/// Keep sigma_j >= tau * sigma_1.
struct RelativeCutoff {
  double tau;
};
/// Smallest r whose leading sigma_j^2 reach a fraction eta of the total.
struct Energy {
  double eta;
};
using RankPolicy = std::variant<Fixed, RelativeCutoff, Energy>;

inline RankPolicy default_rank_policy() { return RelativeCutoff{1e-10}; }

Index choose_rank(const Eigen::VectorXd& singular_values, const RankPolicy& policy);
inline Index choose_rank(const HankelEmbedding& embedding, const RankPolicy& policy) {
  return choose_rank(embedding.singular_values, policy);
}

/// ||H - H_r||_F for the best rank-r approximation: sqrt(sum_{j>r} sigma_j^2).
double truncation_residual(const Eigen::VectorXd& singular_values, Index r);

enum class DeembedMode { first_row, antidiagonal_average };

/// Recovers a channels x (n_delays + cols - 1) series from an embedded
/// matrix. first_row reads row c*N then the tail of the last column;
/// antidiagonal_average takes the mean of each antidiagonal per block.
Eigen::MatrixXcd deembed(const Eigen::MatrixXcd& embedded, Index channels, Index n_delays,
                         DeembedMode mode = DeembedMode::first_row,
                         kernels::Backend backend = kernels::default_backend());

}  // namespace scalesep::embedding
