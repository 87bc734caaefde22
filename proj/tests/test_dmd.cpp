#include <doctest.h>

#include <numbers>

#include "scalesep/dmd.hpp"
#include "scalesep/embedding.hpp"
#include "scalesep/log.hpp"
#include "scalesep/solver.hpp"
#include "support.hpp"

using namespace scalesep;
using namespace scalesep::dmd;
using testing::thrown_kind;
using cd = std::complex<double>;

namespace {

DmdModel fit_matrix(const Eigen::MatrixXd& snapshots, Index rank, double dt = 1.0, FitOptions opts = {}) {
  const auto [x1, x2] = split_snapshots(snapshots);
  return fit(x1, x2, rank, dt, 0.0, opts);
}

DmdModel toy_model(Index rank = 20) {
  const auto toy = solver::generate_toy();
  const auto h = embedding::build_hankel(toy, 300);
  const auto [x1, x2] = split_snapshots(h);
  log::ScopedSink quiet([](std::string_view) {});
  return fit(x1, x2, rank, toy.dt(), toy.t0(), {.clamp_to_noise_floor = true});
}

}  // namespace

TEST_CASE("split_snapshots shifts columns") {
  const Eigen::MatrixXd h{{1, 2, 3}, {2, 3, 4}};
  const auto [x1, x2] = split_snapshots(h);
  CHECK(x1 == Eigen::MatrixXd{{1, 2}, {2, 3}});
  CHECK(x2 == Eigen::MatrixXd{{2, 3}, {3, 4}});
  CHECK(thrown_kind([] { split_snapshots(Eigen::MatrixXd::Ones(3, 1)); }) == "TooFewColumns");

  std::mt19937 rng(1);
  const auto sys = testing::random_system(4, rng);
  const auto pair = split_snapshots(sys.snapshots);
  for (Index j = 0; j + 1 < pair.x1.cols(); ++j) CHECK(pair.x2.col(j) == pair.x1.col(j + 1));
}

TEST_CASE("toy Hankel on the t_end = 15 grid has 1201 X1 columns") {
  const auto toy = solver::generate_toy(15.0);
  REQUIRE(toy.samples() == 1501);
  const auto h = embedding::build_hankel(toy, 300);
  CHECK(h.columns() == 1202);
  CHECK(split_snapshots(h).x1.cols() == 1201);
}

TEST_CASE("one-mode decay") {
  Eigen::MatrixXd x(2, 12);
  x.col(0) << 1.0, 2.0;
  for (Index k = 1; k < x.cols(); ++k) x.col(k) = 0.5 * x.col(k - 1);
  const auto m = fit_matrix(x, 1);
  REQUIRE(m.rank == 1);
  CHECK(std::abs(m.discrete_eigs(0) - 0.5) < 1e-12);
  CHECK(std::abs(m.frequencies(0) - std::log(0.5)) < 1e-12);
  CHECK(std::abs(m.modes.col(0).norm() - 1.0) < 1e-14);

  const std::vector<double> times{0.0, 1.0, 2.0, 3.0, 7.0};
  const auto r = reconstruct(m, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double scale = std::pow(0.5, times[k]);
    CHECK(std::abs(r(0, static_cast<Index>(k)) - cd(scale)) < 1e-12);
    CHECK(std::abs(r(1, static_cast<Index>(k)) - cd(2.0 * scale)) < 1e-12);
  }
}

TEST_CASE("cos(10 t) yields +-10i") {
  const auto s = testing::sampled(0.0, 0.01, 500, [](double t) { return std::cos(10.0 * t); });
  for (const Index n_delays : {3, 10, 50}) {
    const auto h = embedding::build_hankel(s, n_delays);
    const auto [x1, x2] = split_snapshots(h);
    const auto m = fit(x1, x2, 2, s.dt(), s.t0());
    CHECK(testing::multiset_distance(testing::to_list(m.frequencies), {cd(0, 10), cd(0, -10)}) < 1e-6);
  }
}

TEST_CASE("toy generators: exponential-basis oracle and DMD spectrum") {
  const auto toy = solver::generate_toy();
  // Oracle: least squares on the five generators {1, cos t, sin t, cos 10t, sin 10t}.
  const Index n = toy.samples();
  Eigen::MatrixXd basis(n, 5);
  for (Index k = 0; k < n; ++k) {
    const double t = toy.time(k);
    basis.row(k) << 1.0, std::cos(t), std::sin(t), std::cos(10 * t), std::sin(10 * t);
  }
  const Eigen::VectorXd y = toy.values().row(0).transpose();
  const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(y);
  CHECK((basis * coef - y).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(coef(0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(coef(1) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(coef(4) == doctest::Approx(0.1).epsilon(1e-8));

  const auto m = toy_model(20);
  CHECK(m.requested_rank == 20);
  const std::vector<cd> generators{0.0, cd(0, 1), cd(0, -1), cd(0, 10), cd(0, -10)};
  std::vector<bool> used(static_cast<std::size_t>(m.rank), false);
  for (const cd w : generators) {
    Index j = -1;
    CHECK(testing::nearest(m.frequencies, w, &j) < 1e-4);
    used[static_cast<std::size_t>(j)] = true;
  }
  const double bmax = m.amplitudes.cwiseAbs().maxCoeff();
  for (Index j = 0; j < m.rank; ++j)
    if (!used[static_cast<std::size_t>(j)]) CHECK(std::abs(m.amplitudes(j)) < 1e-6 * bmax);
}

TEST_CASE("toy rank 20 without clamping crosses the noise floor") {
  const auto toy = solver::generate_toy();
  const auto h = embedding::build_hankel(toy, 300);
  const auto [x1, x2] = split_snapshots(h);
  CHECK(thrown_kind([&] { fit(x1, x2, 20, toy.dt(), toy.t0()); }) == "SingularTruncation");
  std::vector<std::string> warnings;
  log::ScopedSink sink([&](std::string_view w) { warnings.emplace_back(w); });
  const auto m = fit(x1, x2, 20, toy.dt(), toy.t0(), {.clamp_to_noise_floor = true});
  CHECK(m.rank == 5);
  CHECK(warnings.size() == 1);
}

TEST_CASE("random linear systems: eigenvalues match a direct eigensolver") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Index dim = 1 + trial % 6;
    const auto sys = testing::random_system(dim, rng);
    const auto m = fit_matrix(sys.snapshots, dim);
    const Eigen::VectorXcd oracle = Eigen::EigenSolver<Eigen::MatrixXd>(sys.a, false).eigenvalues();
    CAPTURE(trial);
    CHECK(testing::multiset_distance(testing::to_list(m.discrete_eigs), testing::to_list(oracle)) < 1e-8);
    for (Index j = 0; j < m.rank; ++j) {
      CHECK(std::abs(m.modes.col(j).norm() - 1.0) < 1e-12);
      CHECK(std::abs(std::exp(m.frequencies(j) * m.dt) - m.discrete_eigs(j)) < 1e-12);
      CHECK(std::abs(m.frequencies(j).imag()) <= std::numbers::pi / m.dt + 1e-12);
    }
  }
}

TEST_CASE("exact modes are eigenvectors of the generating matrix") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const Index dim = 2 + trial % 5;
    const auto sys = testing::random_system(dim, rng);
    const auto m = fit_matrix(sys.snapshots, dim, 1.0, {.modes = ModeKind::exact});
    const Eigen::MatrixXcd a = sys.a.cast<cd>();
    for (Index j = 0; j < m.rank; ++j) {
      CHECK(std::abs(m.modes.col(j).norm() - 1.0) < 1e-12);
      CHECK((a * m.modes.col(j) - m.discrete_eigs(j) * m.modes.col(j)).norm() < 1e-8);
    }
  }
}

TEST_CASE("amplitudes minimize the first-snapshot residual") {
  std::mt19937 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    // Rank below the state dimension so the least-squares problem is overdetermined.
    Eigen::MatrixXd x(8, 30);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    const auto m = fit_matrix(x, 3 + trial % 4);
    const Eigen::VectorXcd target = x.col(0).cast<cd>();
    // Oracle: complex normal equations.
    const Eigen::MatrixXcd gram = m.modes.adjoint() * m.modes;
    const Eigen::VectorXcd b_ne = gram.ldlt().solve(m.modes.adjoint() * target);
    const double best = (m.modes * b_ne - target).norm();
    const double got = (m.modes * m.amplitudes - target).norm();
    CHECK(got <= best * (1.0 + 1e-9) + 1e-12);
    CHECK((m.amplitudes - b_ne).norm() <= 1e-8 * (1.0 + b_ne.norm()));
    // Any perturbation increases the residual.
    for (Index j = 0; j < m.rank; ++j) {
      Eigen::VectorXcd b = m.amplitudes;
      b(j) += cd(1e-3, -1e-3);
      CHECK((m.modes * b - target).norm() > got);
    }
  }
}

TEST_CASE("reconstruct at t0 reproduces the first snapshot within the least-squares residual") {
  const auto m = toy_model();
  const auto toy = solver::generate_toy();
  const auto h = embedding::build_hankel(toy, 300);
  const std::vector<double> t0{toy.t0()};
  const auto r = reconstruct(m, t0);
  const Eigen::VectorXcd x0 = h.matrix.col(0).cast<cd>();
  const Eigen::VectorXcd direct = m.modes * m.amplitudes;
  CHECK((r.col(0) - direct).norm() <= 1e-12 * x0.norm());
  CHECK((r.col(0) - x0).norm() <= 1e-10 * x0.norm());
}

TEST_CASE("shift consistency: one step multiplies each mode by lambda") {
  const auto m = toy_model();
  const std::vector<double> times{0.37, 1.5, 4.0};
  std::vector<double> next;
  for (double t : times) next.push_back(t + m.dt);
  for (Index j = 0; j < m.rank; ++j) {
    const std::vector<Index> one{j};
    const auto a = evaluate(m, one, times);
    const auto b = evaluate(m, one, next);
    CHECK((b - m.discrete_eigs(j) * a).norm() <= 1e-12 * (1.0 + a.norm()));
  }
  const auto full = reconstruct(m, times);
  const auto full_next = reconstruct(m, next);
  Eigen::MatrixXcd propagated(m.rows(), static_cast<Index>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    Eigen::VectorXcd coeff(m.rank);
    for (Index j = 0; j < m.rank; ++j)
      coeff(j) = m.discrete_eigs(j) * m.amplitudes(j) * std::exp(m.frequencies(j) * (times[k] - m.t0));
    propagated.col(static_cast<Index>(k)) = m.modes * coeff;
  }
  CHECK((full_next - propagated).norm() <= 1e-11 * full.norm());
}

TEST_CASE("real data gives conjugate-closed spectra and real reconstructions") {
  std::mt19937 rng(31);
  std::vector<DmdModel> models{toy_model()};
  for (int trial = 0; trial < 12; ++trial) models.push_back(fit_matrix(testing::random_system(1 + trial % 6, rng).snapshots, 1 + trial % 6));
  for (const auto& m : models) {
    const auto partners = conjugate_partners(m);
    for (Index j = 0; j < m.rank; ++j) {
      const Index p = partners[static_cast<std::size_t>(j)];
      REQUIRE(p >= 0);
      CHECK(partners[static_cast<std::size_t>(p)] == j);
      CHECK(std::abs(m.discrete_eigs(p) - std::conj(m.discrete_eigs(j))) <= 1e-8 * std::max(1.0, std::abs(m.discrete_eigs(j))));
    }
    std::vector<double> times;
    for (const double k : {0.0, 1.0, 2.0, 5.0, 13.0}) times.push_back(m.t0 + k * m.dt);
    // A negative real eigenvalue oscillates at the Nyquist rate and is only real on the sample grid.
    const bool nyquist = (m.discrete_eigs.array().real() < 0.0 && m.discrete_eigs.array().imag().abs() < 1e-12).any();
    if (!nyquist) {
      for (const double s : {0.5, 3.25}) times.push_back(m.t0 + s * m.dt);
    }
    const auto r = reconstruct(m, times);
    CHECK((r.imag().array().abs() <= 1e-8 * (r.real().array().abs() + 1.0)).all());
  }
}

TEST_CASE("toy reconstruction matches the training data") {
  const auto m = toy_model();
  const auto toy = solver::generate_toy();
  const auto h = embedding::build_hankel(toy, 300);
  std::vector<double> times;
  for (Index j = 0; j < h.columns(); ++j) times.push_back(h.column_time(j));
  const auto r = reconstruct(m, times);
  CHECK((r.real() - h.matrix).cwiseAbs().maxCoeff() < 1e-3);
  const auto y = embedding::deembed(r, 1, 300);
  CHECK((y.real() - toy.values()).cwiseAbs().maxCoeff() < 1e-3);
  for (const auto backend : {kernels::Backend::serial, kernels::Backend::parallel})
    CHECK((reconstruct(m, times, backend) - r).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fit errors") {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 6);
  const auto [x1, x2] = split_snapshots(x);
  CHECK(thrown_kind([&] { fit(x1, x2, 5, 1.0, 0.0); }) == "RankTooLarge");
  CHECK(thrown_kind([&] { fit(x1, x2, 0, 1.0, 0.0); }) == "InvalidArgument");
  CHECK(thrown_kind([&] { fit(x1, x2.leftCols(3), 2, 1.0, 0.0); }) == "ShapeMismatch");
  CHECK(thrown_kind([&] { fit(x1, x2, 2, 0.0, 0.0); }) == "InvalidStep");
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 4);
  CHECK(thrown_kind([&] { fit(zero, zero, 1, 1.0, 0.0); }) == "SingularTruncation");
}

TEST_CASE("growth beyond exp(700) is reported") {
  DmdModel m;
  m.rank = 2;
  m.requested_rank = 2;
  m.dt = 0.1;
  m.t0 = 1.0;
  m.modes = Eigen::MatrixXcd::Identity(2, 2);
  m.frequencies = Eigen::VectorXcd{{cd(1.0, 0.0), cd(-5.0, 0.0)}};
  m.discrete_eigs = (m.frequencies * m.dt).array().exp();
  m.amplitudes = Eigen::VectorXcd{{cd(1.0), cd(1.0)}};
  const std::vector<double> fine{1.0, 600.0};
  CHECK_NOTHROW(reconstruct(m, fine));
  const std::vector<double> far{1.0, 702.0};
  CHECK(thrown_kind([&] { reconstruct(m, far); }) == "NumericOverflow");
  const std::vector<Index> decaying{1};
  CHECK_NOTHROW(evaluate(m, decaying, far));
}

TEST_CASE("model bundle round trip is exact") {
  testing::TempDir dir("bundle");
  ModelBundle b{toy_model(), 1, 300, 1257};
  write_bundle(b, dir.path());
  const auto back = read_bundle(dir.path());
  CHECK(back.channels == 1);
  CHECK(back.n_delays == 300);
  CHECK(back.samples == 1257);
  CHECK(back.model.rank == b.model.rank);
  CHECK(back.model.requested_rank == b.model.requested_rank);
  CHECK(back.model.dt == b.model.dt);
  CHECK(back.model.t0 == b.model.t0);
  CHECK(back.model.modes == b.model.modes);
  CHECK(back.model.discrete_eigs == b.model.discrete_eigs);
  CHECK(back.model.frequencies == b.model.frequencies);
  CHECK(back.model.amplitudes == b.model.amplitudes);
  CHECK(back.model.singular_values == b.model.singular_values);
  CHECK(thrown_kind([&] { read_bundle(dir / "missing"); }) == "IoFailure");
}
