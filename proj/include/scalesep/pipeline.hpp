#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scalesep/dmd.hpp"
#include "scalesep/embedding.hpp"
#include "scalesep/separation.hpp"
#include "scalesep/solver.hpp"

namespace scalesep::cli {

namespace fs = std::filesystem;

// Experiment defaults: the toy problem uses 300 delays and rank 20, the
// gauge data 150 delays and rank 75.
inline constexpr Index kToyDelays = 300;
inline constexpr Index kToyRank = 20;
inline constexpr double kToyEpsilon = 0.3;
inline constexpr Index kGaugeDelays = 150;
inline constexpr Index kGaugeRank = 75;

struct PipelineOptions {
  Index delays = kGaugeDelays;
  embedding::RankPolicy rank = embedding::Fixed{kGaugeRank};
  separation::SplitOptions split;
  dmd::ModeKind modes = dmd::ModeKind::projected;
};

/// Embed, fit, separate.
struct PipelineResult {
  embedding::HankelEmbedding embedding;
  Index chosen_rank = 0;
  dmd::DmdModel model;
  separation::ScaleSplit split;
  Eigen::MatrixXd reconstruction;  // channels x samples, real part of the de-embedded DMD sum
  double max_reconstruction_error = 0.0;
};

PipelineResult run_pipeline(const TimeSeries& data, const PipelineOptions& options);

/// singular_values.csv, modes.csv, reconstruction.csv, error.csv, slow.csv,
/// fast.csv, slow_rhs.csv, fast_rhs.csv.
void write_pipeline_outputs(const PipelineResult& result, const TimeSeries& data,
                            const std::vector<std::string>& channel_names, const fs::path& dir);

struct InputSpec {
  std::optional<fs::path> csv;
  std::string time_column = "t";
  std::vector<fs::path> gauges;
  Index channel = 0;
};

struct LoadedInput {
  TimeSeries series;
  std::vector<std::string> names;
};

LoadedInput load_input(const InputSpec& input);

struct ToyConfig {
  double t_end = solver::kToyTEnd;
  double dt = solver::kToyDt;
  double y0 = solver::kToyY0;
  PipelineOptions pipeline{kToyDelays, embedding::Fixed{kToyRank}, {kToyEpsilon}, dmd::ModeKind::projected};
  double slow_step = 0.1;
  Index substeps = 10;
  solver::Scheme scheme = solver::Scheme::lie_trotter;
  solver::Interpolation interpolation = solver::Interpolation::cubic;
  fs::path output_dir = "toy_out";
};

struct ToyReport {
  Index requested_rank = 0;
  Index effective_rank = 0;
  std::vector<Index> slow_indices;
  std::vector<Index> fast_indices;
  double max_reconstruction_error = 0.0;
  double max_solution_error = 0.0;      // multirate vs closed form, over the span
  double final_reference_gap = 0.0;     // |multirate - single-rate RK4| at t_end
  solver::SolveResult multirate;
  bool warned_reconstruction = false;
};

/// Reconstruction errors above this are reported as a warning.
inline constexpr double kReconstructionWarning = 1e-1;

ToyReport cmd_toy(const ToyConfig& config);

struct SeparateConfig {
  InputSpec input;
  PipelineOptions pipeline;
  fs::path output_dir = "separate_out";
};

struct SeparateReport {
  PipelineResult result;
  Index samples = 0;
};

SeparateReport cmd_separate(const SeparateConfig& config);

struct SolveConfig {
  fs::path slow_rhs;
  fs::path fast_rhs;
  std::string time_column = "t";
  std::optional<std::string> column;  // data column; first one by default
  double y0 = 0.0;
  std::optional<double> t0;     // default: common start of the RHS spans
  std::optional<double> t_end;  // default: common end
  double slow_step = 0.1;
  Index substeps = 10;
  solver::Scheme scheme = solver::Scheme::lie_trotter;
  solver::Interpolation interpolation = solver::Interpolation::cubic;
  fs::path output = "solution.csv";
};

solver::SolveResult cmd_solve(const SolveConfig& config);

/// Loads one column of an RHS CSV as a tabulated function.
solver::TabulatedRhs load_rhs(const fs::path& path, const std::string& time_column,
                              const std::optional<std::string>& column, solver::Interpolation interpolation);

struct DmdFitConfig {
  InputSpec input;
  Index delays = kGaugeDelays;
  embedding::RankPolicy rank = embedding::Fixed{kGaugeRank};
  dmd::ModeKind modes = dmd::ModeKind::projected;
  fs::path output_dir = "model";
};

dmd::ModelBundle cmd_dmd_fit(const DmdFitConfig& config);

struct DmdReconstructConfig {
  fs::path model_dir;
  std::optional<Index> samples;  // default: the training length
  embedding::DeembedMode deembed = embedding::DeembedMode::first_row;
  fs::path output = "reconstruction.csv";
};

TimeSeries cmd_dmd_reconstruct(const DmdReconstructConfig& config);

}  // namespace scalesep::cli
