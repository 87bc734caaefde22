#include "scalesep/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "scalesep/error.hpp"
#include "scalesep/ingest.hpp"
#include "scalesep/log.hpp"

namespace scalesep::cli {
namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

std::vector<std::string> with_time(const std::vector<std::string>& names, const std::string& suffix = {}) {
  std::vector<std::string> h{"t"};
  for (const auto& n : names) h.push_back(n + suffix);
  return h;
}

Index clamp_to_snapshots(Index rank, const embedding::HankelEmbedding& h) {
  const Index limit = std::min(h.rows(), h.columns() - 1);
  if (rank > limit) {
    log::warn("rank " + std::to_string(rank) + " exceeds the " + std::to_string(limit) +
              " snapshot pairs available; clamping");
    return limit;
  }
  return rank;
}

}  // namespace

PipelineResult run_pipeline(const TimeSeries& data, const PipelineOptions& options) {
  auto h = embedding::build_hankel(data, options.delays);
  const Index chosen = embedding::choose_rank(h, options.rank);
  const auto snapshots = dmd::split_snapshots(h);
  auto model = dmd::fit(snapshots.x1, snapshots.x2, clamp_to_snapshots(chosen, h), h.dt, h.t0,
                        {options.modes, /*clamp_to_noise_floor=*/true});
  auto split = separation::separate(model, h, options.split);

  const auto times = separation::column_times(h);
  Eigen::MatrixXd recon =
      embedding::deembed(dmd::reconstruct(model, times), h.channels, h.n_delays, options.split.deembed).real();
  const double err = (data.values() - recon).cwiseAbs().maxCoeff();
  return {std::move(h), chosen, std::move(model), std::move(split), std::move(recon), err};
}

void write_pipeline_outputs(const PipelineResult& r, const TimeSeries& data, const std::vector<std::string>& names,
                            const fs::path& dir) {
  ensure_dir(dir);
  const auto& sv = r.embedding.singular_values;
  Eigen::MatrixXd sv_table(sv.size(), 3);
  for (Index j = 0; j < sv.size(); ++j) sv_table.row(j) << static_cast<double>(j + 1), sv(j), sv(j) / sv(0);
  ingest::write_table(dir / "singular_values.csv", std::vector<std::string>{"index", "sigma", "sigma_rel"}, sv_table);

  const auto& m = r.model;
  Eigen::MatrixXd modes(m.rank, 8);
  for (Index j = 0; j < m.rank; ++j) {
    const bool slow = std::find(r.split.slow_indices.begin(), r.split.slow_indices.end(), j) != r.split.slow_indices.end();
    modes.row(j) << static_cast<double>(j), m.frequencies(j).real(), m.frequencies(j).imag(), std::abs(m.frequencies(j)),
        std::abs(m.amplitudes(j)), m.discrete_eigs(j).real(), m.discrete_eigs(j).imag(), slow ? 1.0 : 0.0;
  }
  ingest::write_table(dir / "modes.csv",
                      std::vector<std::string>{"index", "omega_re", "omega_im", "abs_omega", "abs_b", "lambda_re",
                                               "lambda_im", "slow"},
                      modes);

  const Index n = data.samples();
  const Index ch = data.channels();
  Eigen::MatrixXd overlay(n, 1 + 2 * ch);
  Eigen::MatrixXd error(n, 1 + ch);
  std::vector<std::string> overlay_headers{"t"};
  for (Index c = 0; c < ch; ++c) {
    overlay_headers.push_back(names[static_cast<std::size_t>(c)]);
    overlay_headers.push_back(names[static_cast<std::size_t>(c)] + "_dmd");
  }
  for (Index k = 0; k < n; ++k) {
    overlay(k, 0) = error(k, 0) = data.time(k);
    for (Index c = 0; c < ch; ++c) {
      overlay(k, 1 + 2 * c) = data(c, k);
      overlay(k, 2 + 2 * c) = r.reconstruction(c, k);
      error(k, 1 + c) = std::abs(data(c, k) - r.reconstruction(c, k));
    }
  }
  ingest::write_table(dir / "reconstruction.csv", overlay_headers, overlay);
  ingest::write_table(dir / "error.csv", with_time(names, "_abs_error"), error);

  const auto headers = with_time(names);
  ingest::write_csv(r.split.slow_series, dir / "slow.csv", headers);
  ingest::write_csv(r.split.fast_series, dir / "fast.csv", headers);
  ingest::write_csv(r.split.slow_derivative, dir / "slow_rhs.csv", headers);
  ingest::write_csv(r.split.fast_derivative, dir / "fast_rhs.csv", headers);
}

LoadedInput load_input(const InputSpec& input) {
  if (input.csv.has_value() == !input.gauges.empty()) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of a CSV input or gauge files");
  }
  if (input.csv) {
    auto labeled = ingest::load_csv_labeled(*input.csv, input.time_column);
    return {std::move(labeled.series), std::move(labeled.channel_names)};
  }
  std::vector<std::string> names;
  for (const auto& g : input.gauges) names.push_back(g.stem().string());
  return {ingest::load_gauges(input.gauges, input.channel), std::move(names)};
}

solver::TabulatedRhs load_rhs(const fs::path& path, const std::string& time_column,
                              const std::optional<std::string>& column, solver::Interpolation interpolation) {
  auto labeled = ingest::load_csv_labeled(path, time_column);
  Index idx = 0;
  if (column) {
    const auto it = std::find(labeled.channel_names.begin(), labeled.channel_names.end(), *column);
    if (it == labeled.channel_names.end()) {
      throw Error(ErrorKind::MissingColumn, path.string() + ": no column named '" + *column + "'");
    }
    idx = static_cast<Index>(it - labeled.channel_names.begin());
  }
  const TimeSeries& s = labeled.series;
  return solver::TabulatedRhs(TimeSeries(s.t0(), s.dt(), s.values().row(idx)), interpolation);
}

ToyReport cmd_toy(const ToyConfig& config) {
  ensure_dir(config.output_dir);
  const TimeSeries data = solver::generate_toy(config.t_end, config.dt, config.y0);
  const std::vector<std::string> names{"y"};
  ingest::write_csv(data, config.output_dir / "toy_data.csv", with_time(names));

  PipelineResult result = run_pipeline(data, config.pipeline);
  write_pipeline_outputs(result, data, names, config.output_dir);

  bool warned = false;
  if (result.max_reconstruction_error > kReconstructionWarning) {
    warned = true;
    log::warn("DMD reconstruction error " + ingest::format_double(result.max_reconstruction_error) +
              " exceeds " + ingest::format_double(kReconstructionWarning) + "; the rank may be too small");
  }

  // Solve from the written files, as a downstream integrator would.
  const auto fs_rhs = load_rhs(config.output_dir / "slow_rhs.csv", "t", std::nullopt, config.interpolation);
  const auto ff_rhs = load_rhs(config.output_dir / "fast_rhs.csv", "t", std::nullopt, config.interpolation);
  const double t0 = fs_rhs.t_start();
  const double t_end = fs_rhs.t_end();
  auto multirate = solver::solve_multirate(fs_rhs, ff_rhs, config.y0, t0, t_end, config.slow_step,
                                           config.substeps, config.scheme);
  const auto reference = solver::solve_reference(fs_rhs, ff_rhs, config.y0, t0, t_end,
                                                 config.slow_step / static_cast<double>(config.substeps));

  const TimeSeries& sol = multirate.solution;
  Eigen::MatrixXd table(sol.samples(), 4);
  double max_solution_error = 0.0;
  for (Index k = 0; k < sol.samples(); ++k) {
    const double t = k == sol.samples() - 1 ? t_end : sol.time(k);
    const double exact = solver::toy_exact(t, config.y0);
    table.row(k) << t, sol(0, k), exact, std::abs(sol(0, k) - exact);
    max_solution_error = std::max(max_solution_error, table(k, 3));
  }
  ingest::write_table(config.output_dir / "solution.csv", std::vector<std::string>{"t", "y", "y_exact", "abs_error"},
                      table);
  const double gap = std::abs(multirate.final_value() - reference.final_value());
  return ToyReport{.requested_rank = result.model.requested_rank,
                   .effective_rank = result.model.rank,
                   .slow_indices = result.split.slow_indices,
                   .fast_indices = result.split.fast_indices,
                   .max_reconstruction_error = result.max_reconstruction_error,
                   .max_solution_error = max_solution_error,
                   .final_reference_gap = gap,
                   .multirate = std::move(multirate),
                   .warned_reconstruction = warned};
}

SeparateReport cmd_separate(const SeparateConfig& config) {
  const LoadedInput input = load_input(config.input);
  PipelineResult result = run_pipeline(input.series, config.pipeline);
  write_pipeline_outputs(result, input.series, input.names, config.output_dir);
  return {std::move(result), input.series.samples()};
}

solver::SolveResult cmd_solve(const SolveConfig& config) {
  const auto fs_rhs = load_rhs(config.slow_rhs, config.time_column, config.column, config.interpolation);
  const auto ff_rhs = load_rhs(config.fast_rhs, config.time_column, config.column, config.interpolation);
  const double t0 = config.t0.value_or(std::max(fs_rhs.t_start(), ff_rhs.t_start()));
  const double t_end = config.t_end.value_or(std::min(fs_rhs.t_end(), ff_rhs.t_end()));
  auto result = config.scheme == solver::Scheme::reference_rk4
                    ? solver::solve_reference(fs_rhs, ff_rhs, config.y0, t0, t_end,
                                              config.slow_step / static_cast<double>(config.substeps))
                    : solver::solve_multirate(fs_rhs, ff_rhs, config.y0, t0, t_end, config.slow_step,
                                              config.substeps, config.scheme);
  const std::vector<std::string> headers{"t", "y"};
  ingest::write_csv(result.solution, config.output, headers);
  return result;
}

dmd::ModelBundle cmd_dmd_fit(const DmdFitConfig& config) {
  const LoadedInput input = load_input(config.input);
  const auto h = embedding::build_hankel(input.series, config.delays);
  const auto snapshots = dmd::split_snapshots(h);
  const Index rank = clamp_to_snapshots(embedding::choose_rank(h, config.rank), h);
  dmd::ModelBundle bundle{dmd::fit(snapshots.x1, snapshots.x2, rank, h.dt, h.t0, {config.modes, true}), h.channels,
                          h.n_delays, h.samples()};
  dmd::write_bundle(bundle, config.output_dir);
  const auto& sv = h.singular_values;
  Eigen::MatrixXd table(sv.size(), 2);
  for (Index j = 0; j < sv.size(); ++j) table.row(j) << static_cast<double>(j + 1), sv(j);
  ingest::write_table(config.output_dir / "singular_values.csv", std::vector<std::string>{"index", "sigma"}, table);
  return bundle;
}

TimeSeries cmd_dmd_reconstruct(const DmdReconstructConfig& config) {
  const auto bundle = dmd::read_bundle(config.model_dir);
  const Index samples = config.samples.value_or(bundle.samples);
  const Index columns = samples - bundle.n_delays + 1;
  if (columns < 1) {
    throw Error(ErrorKind::TooFewSamples, "need at least " + std::to_string(bundle.n_delays) + " samples");
  }
  std::vector<double> times(static_cast<std::size_t>(columns));
  for (Index j = 0; j < columns; ++j) {
    times[static_cast<std::size_t>(j)] = bundle.model.t0 + static_cast<double>(j) * bundle.model.dt;
  }
  const Eigen::MatrixXd values =
      embedding::deembed(dmd::reconstruct(bundle.model, times), bundle.channels, bundle.n_delays, config.deembed).real();
  TimeSeries out(bundle.model.t0, bundle.model.dt, values);
  std::vector<std::string> headers{"t"};
  for (Index c = 0; c < bundle.channels; ++c) headers.push_back("ch" + std::to_string(c));
  ingest::write_csv(out, config.output, headers);
  return out;
}

}  // namespace scalesep::cli
