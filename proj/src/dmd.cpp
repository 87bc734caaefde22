#include "scalesep/dmd.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "scalesep/error.hpp"
#include "scalesep/log.hpp"

namespace scalesep::dmd {

SnapshotPair split_snapshots(const Eigen::MatrixXd& snapshots) {
  if (snapshots.cols() < 2) {
    throw Error(ErrorKind::TooFewColumns,
                "need at least 2 snapshots, got " + std::to_string(snapshots.cols()));
  }
  const Index pairs = snapshots.cols() - 1;
  return {snapshots.leftCols(pairs), snapshots.rightCols(pairs)};
}

DmdModel fit(const Eigen::MatrixXd& x1, const Eigen::MatrixXd& x2, Index rank, double dt, double t0,
             const FitOptions& options) {
  if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "X1 and X2 must have the same shape");
  }
  if (x1.cols() < 1 || x1.rows() < 1) throw Error(ErrorKind::TooFewColumns, "empty snapshot matrices");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidStep, "dt must be positive");
  const Index max_rank = std::min(x1.rows(), x1.cols());
  if (rank < 1) throw Error(ErrorKind::InvalidArgument, "rank must be >= 1");
  if (rank > max_rank) {
    throw Error(ErrorKind::RankTooLarge,
                "rank " + std::to_string(rank) + " exceeds min(rows, cols) = " + std::to_string(max_rank));
  }

  const Eigen::BDCSVD<Eigen::MatrixXd> svd(x1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (!(sigma(0) > 0.0)) throw Error(ErrorKind::SingularTruncation, "X1 is identically zero");

  Index r = rank;
  if (!(sigma(r - 1) > kNoiseFloor * sigma(0))) {
    Index floor_rank = 0;
    while (floor_rank < max_rank && sigma(floor_rank) > kNoiseFloor * sigma(0)) ++floor_rank;
    if (!options.clamp_to_noise_floor) {
      throw Error(ErrorKind::SingularTruncation,
                  "sigma_" + std::to_string(rank) + "/sigma_1 = " + std::to_string(sigma(r - 1) / sigma(0)) +
                      " is below the noise floor; numerical rank is " + std::to_string(floor_rank));
    }
    log::warn("rank " + std::to_string(rank) + " crosses the singular-value noise floor; using numerical rank " +
              std::to_string(floor_rank));
    r = floor_rank;
  }

  const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd v = svd.matrixV().leftCols(r);
  const Eigen::VectorXd inv_sigma = sigma.head(r).cwiseInverse();
  const Eigen::MatrixXd x2_v_sinv = x2 * v * inv_sigma.asDiagonal();
  const Eigen::MatrixXd reduced = u.transpose() * x2_v_sinv;

  const Eigen::EigenSolver<Eigen::MatrixXd> eig(reduced, true);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::EigenFailure, "eigendecomposition of the reduced operator failed");

  DmdModel m;
  m.rank = r;
  m.requested_rank = rank;
  m.dt = dt;
  m.t0 = t0;
  m.singular_values = sigma.head(r);
  m.discrete_eigs = eig.eigenvalues();
  const Eigen::MatrixXcd w = eig.eigenvectors();
  m.modes = options.modes == ModeKind::projected ? Eigen::MatrixXcd(u.cast<std::complex<double>>() * w)
                                                 : Eigen::MatrixXcd(x2_v_sinv.cast<std::complex<double>>() * w);
  for (Index j = 0; j < r; ++j) {
    const double norm = m.modes.col(j).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorKind::EigenFailure, "mode " + std::to_string(j) + " has zero or non-finite norm");
    }
    m.modes.col(j) /= norm;
  }

  m.frequencies.resize(r);
  for (Index j = 0; j < r; ++j) {
    if (m.discrete_eigs(j) == std::complex<double>(0.0, 0.0)) {
      throw Error(ErrorKind::EigenFailure, "zero eigenvalue has no continuous-time frequency");
    }
    m.frequencies(j) = std::log(m.discrete_eigs(j)) / dt;
  }

  const Eigen::VectorXcd first = x1.col(0).cast<std::complex<double>>();
  m.amplitudes = m.modes.colPivHouseholderQr().solve(first);
  return m;
}

namespace {

void check_overflow(const DmdModel& model, std::span<const Index> indices, std::span<const double> times) {
  for (const double t : times) {
    if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "non-finite evaluation time");
    for (const Index j : indices) {
      const double growth = model.frequencies(j).real() * (t - model.t0);
      if (growth > 700.0) {
        throw Error(ErrorKind::NumericOverflow, "mode " + std::to_string(j) + " grows by exp(" +
                                                    std::to_string(growth) + ") at t = " + std::to_string(t));
      }
    }
  }
}

}  // namespace

Eigen::MatrixXcd evaluate(const DmdModel& model, std::span<const Index> indices, std::span<const double> times,
                          bool derivative, kernels::Backend backend) {
  for (const Index j : indices) {
    if (j < 0 || j >= model.rank) throw Error(ErrorKind::InvalidArgument, "mode index out of range");
  }
  check_overflow(model, indices, times);
  const auto count = static_cast<Index>(indices.size());
  Eigen::MatrixXcd modes(model.rows(), count);
  Eigen::VectorXcd weights(count);
  Eigen::VectorXcd rates(count);
  for (Index i = 0; i < count; ++i) {
    const Index j = indices[static_cast<std::size_t>(i)];
    modes.col(i) = model.modes.col(j);
    rates(i) = model.frequencies(j);
    weights(i) = derivative ? model.frequencies(j) * model.amplitudes(j) : model.amplitudes(j);
  }
  std::vector<double> offsets(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) offsets[k] = times[k] - model.t0;
  return kernels::mode_sum(modes, weights, rates, offsets, backend);
}

Eigen::MatrixXcd reconstruct(const DmdModel& model, std::span<const double> times, kernels::Backend backend) {
  std::vector<Index> all(static_cast<std::size_t>(model.rank));
  for (Index j = 0; j < model.rank; ++j) all[static_cast<std::size_t>(j)] = j;
  return evaluate(model, all, times, false, backend);
}

std::vector<Index> conjugate_partners(const DmdModel& model) {
  const Index r = model.rank;
  std::vector<Index> partner(static_cast<std::size_t>(r), -1);
  for (Index j = 0; j < r; ++j) {
    const auto lam = model.discrete_eigs(j);
    const double tol = 1e-8 * std::max(1.0, std::abs(lam));
    if (std::abs(lam.imag()) <= tol) {
      partner[static_cast<std::size_t>(j)] = j;
      continue;
    }
    if (partner[static_cast<std::size_t>(j)] >= 0) continue;
    Index best = -1;
    double best_dist = tol;
    for (Index k = 0; k < r; ++k) {
      if (k == j || partner[static_cast<std::size_t>(k)] >= 0) continue;
      const double d = std::abs(model.discrete_eigs(k) - std::conj(lam));
      if (d <= best_dist) {
        best_dist = d;
        best = k;
      }
    }
    if (best >= 0) {
      partner[static_cast<std::size_t>(j)] = best;
      partner[static_cast<std::size_t>(best)] = j;
    }
  }
  return partner;
}

}  // namespace scalesep::dmd
