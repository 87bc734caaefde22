#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "scalesep/embedding.hpp"
#include "scalesep/kernels.hpp"

namespace scalesep::dmd {

/// Truncations with sigma_l / sigma_1 at or below this are refused.
inline constexpr double kNoiseFloor = 1e-14;

enum class ModeKind {
  projected,  // Phi = U W
  exact,      // Phi = X2 V Sigma^-1 W
};

struct FitOptions {
  ModeKind modes = ModeKind::projected;
  // Lower the rank to the last singular value above kNoiseFloor (with a
  // warning) instead of throwing SingularTruncation.
  bool clamp_to_noise_floor = false;
};

/// Rank-l exact DMD. Columns of modes have unit 2-norm; amplitudes carry the
/// scale. frequencies(j) = log(discrete_eigs(j)) / dt on the principal
/// branch, so only |Im| < pi/dt is identifiable.
struct DmdModel {
  Index rank = 0;
  Index requested_rank = 0;
  Eigen::MatrixXcd modes;
  Eigen::VectorXcd discrete_eigs;
  Eigen::VectorXcd frequencies;
  Eigen::VectorXcd amplitudes;
  double dt = 0.0;
  double t0 = 0.0;
  Eigen::VectorXd singular_values;  // leading `rank` singular values of X1

  Index rows() const noexcept { return modes.rows(); }
};

struct SnapshotPair {
  Eigen::MatrixXd x1;  // columns 0 .. M-2
  Eigen::MatrixXd x2;  // columns 1 .. M-1
};

SnapshotPair split_snapshots(const Eigen::MatrixXd& snapshots);
inline SnapshotPair split_snapshots(const embedding::HankelEmbedding& h) { return split_snapshots(h.matrix); }

DmdModel fit(const Eigen::MatrixXd& x1, const Eigen::MatrixXd& x2, Index rank, double dt, double t0,
             const FitOptions& options = {});

/// Column k is sum_j b_j phi_j exp(omega_j (times[k] - t0)). Throws
/// NumericOverflow when some Re(omega_j)(t - t0) exceeds 700.
Eigen::MatrixXcd reconstruct(const DmdModel& model, std::span<const double> times,
                             kernels::Backend backend = kernels::default_backend());

/// Partial modal sum over `indices`; with derivative=true each term is
/// multiplied by omega_j (exact time derivative of the sum).
Eigen::MatrixXcd evaluate(const DmdModel& model, std::span<const Index> indices, std::span<const double> times,
                          bool derivative = false, kernels::Backend backend = kernels::default_backend());

/// partner[j] is the index whose eigenvalue is the conjugate of eig j
/// (j itself for real eigenvalues), or -1 when no partner matches within
/// 1e-8 relative.
std::vector<Index> conjugate_partners(const DmdModel& model);

/// Embedding layout travels with a saved model so `reconstruct` can be
/// de-embedded by a separate process.
struct ModelBundle {
  DmdModel model;
  Index channels = 1;
  Index n_delays = 1;
  Index samples = 0;
};

/// meta.csv, spectrum.csv and modes.csv in `dir`, 17 significant digits.
void write_bundle(const ModelBundle& bundle, const std::filesystem::path& dir);
ModelBundle read_bundle(const std::filesystem::path& dir);

}  // namespace scalesep::dmd
