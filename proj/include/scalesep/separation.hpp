#pragma once

#include <span>
#include <vector>

#include "scalesep/dmd.hpp"
#include "scalesep/embedding.hpp"
#include "scalesep/time_series.hpp"

namespace scalesep::separation {

inline constexpr double kDefaultEpsilon = 0.05;

struct ModePartition {
  std::vector<Index> slow;  // ascending
  std::vector<Index> fast;  // ascending
};

/// slow = {j : |omega_j| <= epsilon * max_k |omega_k|}, closed under
/// conjugation (a pair goes slow when either member passes). A spectrum
/// with a single scale (all |omega_j| equal, including all zero) has no fast
/// band and is entirely slow.
ModePartition classify_modes(const dmd::DmdModel& model, double epsilon);

/// sum_{j in slow} b_j phi_j exp(omega_j (t - t0)) in embedded coordinates.
Eigen::MatrixXcd lowrank_component(const dmd::DmdModel& model, std::span<const Index> slow,
                                   std::span<const double> times);

enum class SparseMethod {
  modal,     // Re of the fast-mode sum
  residual,  // data - |lowrank|, elementwise
};

/// `data` is only read by the residual method and must match the embedded
/// shape (rows x times.size()).
Eigen::MatrixXd sparse_component(const dmd::DmdModel& model, std::span<const Index> slow,
                                 std::span<const double> times, SparseMethod method,
                                 const Eigen::MatrixXd& data = Eigen::MatrixXd());

/// Re sum_{j in indices} omega_j b_j phi_j exp(omega_j (t - t0)), embedded.
Eigen::MatrixXd component_derivative(const dmd::DmdModel& model, std::span<const Index> indices,
                                     std::span<const double> times);

/// Central differences inside, second-order one-sided at both ends.
TimeSeries finite_difference_derivative(const TimeSeries& series);

enum class DerivativeMethod { modal, finite_difference };

struct SplitOptions {
  double epsilon = kDefaultEpsilon;
  SparseMethod sparse = SparseMethod::modal;
  // Ignored by the residual method, which always differentiates numerically.
  DerivativeMethod derivative = DerivativeMethod::modal;
  embedding::DeembedMode deembed = embedding::DeembedMode::first_row;
};

/// Slow/fast components on the analysis grid of `h`, in channel space.
struct ScaleSplit {
  std::vector<Index> slow_indices;
  std::vector<Index> fast_indices;
  double threshold;
  SparseMethod method;
  TimeSeries slow_series;
  TimeSeries fast_series;
  TimeSeries slow_derivative;  // f_s
  TimeSeries fast_derivative;  // f_f
};

ScaleSplit separate(const dmd::DmdModel& model, const embedding::HankelEmbedding& h, const SplitOptions& options);

/// Snapshot times t0 + j*dt, j < columns, for the embedding's analysis grid.
std::vector<double> column_times(const embedding::HankelEmbedding& h);

}  // namespace scalesep::separation
