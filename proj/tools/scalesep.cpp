// scalesep: slow/fast scale separation of time series with Hankel DMD, and
// multirate integration of the separated right-hand sides.

#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "scalesep/error.hpp"
#include "scalesep/ingest.hpp"
#include "scalesep/pipeline.hpp"

namespace {

using namespace scalesep;

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct RankFlags {
  std::optional<Index> fixed;
  std::optional<double> relative;
  std::optional<double> energy;

  void add(CLI::App& app) {
    auto* r = app.add_option("--rank", fixed, "Fixed truncation rank");
    auto* rel = app.add_option("--rank-rel", relative, "Keep sigma_j >= tau*sigma_1");
    auto* en = app.add_option("--rank-energy", energy, "Keep this fraction of sum sigma^2");
    r->excludes(rel)->excludes(en);
    rel->excludes(en);
  }

  embedding::RankPolicy resolve(embedding::RankPolicy fallback) const {
    if (fixed) return embedding::Fixed{*fixed};
    if (relative) return embedding::RelativeCutoff{*relative};
    if (energy) return embedding::Energy{*energy};
    return fallback;
  }
};

struct InputFlags {
  std::optional<std::string> csv;
  std::string time_column = "t";
  std::vector<std::string> gauges;
  Index channel = 0;

  void add(CLI::App& app) {
    auto* c = app.add_option("--input", csv, "CSV input with a header row")->check(CLI::ExistingFile);
    app.add_option("--time-column", time_column, "Time column name in the CSV")->capture_default_str();
    auto* g = app.add_option("--gauge", gauges, "Gauge file (repeat, in channel order)")->check(CLI::ExistingFile);
    app.add_option("--channel", channel, "0-based data column after time in gauge files")->capture_default_str();
    c->excludes(g);
    g->excludes(c);
  }

  cli::InputSpec spec() const {
    cli::InputSpec s;
    if (csv) s.csv = *csv;
    s.time_column = time_column;
    for (const auto& g : gauges) s.gauges.emplace_back(g);
    s.channel = channel;
    return s;
  }
};

const std::map<std::string, solver::Scheme> kSchemes{{"lie-trotter", solver::Scheme::lie_trotter},
                                                     {"strang", solver::Scheme::strang},
                                                     {"reference-rk4", solver::Scheme::reference_rk4}};
const std::map<std::string, solver::Interpolation> kInterp{{"linear", solver::Interpolation::linear},
                                                           {"cubic", solver::Interpolation::cubic}};
const std::map<std::string, separation::SparseMethod> kSparse{{"modal", separation::SparseMethod::modal},
                                                              {"residual", separation::SparseMethod::residual}};
const std::map<std::string, separation::DerivativeMethod> kDeriv{
    {"modal", separation::DerivativeMethod::modal}, {"fd", separation::DerivativeMethod::finite_difference}};
const std::map<std::string, embedding::DeembedMode> kDeembed{
    {"first-row", embedding::DeembedMode::first_row}, {"antidiagonal", embedding::DeembedMode::antidiagonal_average}};
const std::map<std::string, dmd::ModeKind> kModes{{"projected", dmd::ModeKind::projected},
                                                  {"exact", dmd::ModeKind::exact}};

// Parses a keyword option into its enum after CLI11 has validated it.
template <typename E>
struct Choice {
  const std::map<std::string, E>* table;
  std::string value;

  CLI::Option* add(CLI::App& app, const std::string& name, const std::string& help) {
    return app.add_option(name, value, help)->check(CLI::IsMember(*table));
  }
  void apply(E& target) const {
    if (!value.empty()) target = table->at(value);
  }
};

struct SplitFlags {
  Choice<separation::SparseMethod> sparse{&kSparse, {}};
  Choice<separation::DerivativeMethod> derivative{&kDeriv, {}};
  Choice<embedding::DeembedMode> deembed{&kDeembed, {}};
  Choice<dmd::ModeKind> modes{&kModes, {}};

  void add(CLI::App& app, separation::SplitOptions& split) {
    app.add_option("--epsilon", split.epsilon, "Slow-mode threshold on |omega|/max|omega|")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sparse.add(app, "--sparse", "Fast component: modal | residual");
    derivative.add(app, "--derivative", "Component derivatives: modal | fd");
    deembed.add(app, "--deembed", "first-row | antidiagonal");
    modes.add(app, "--modes", "DMD modes: projected | exact");
  }
  void apply(separation::SplitOptions& split, dmd::ModeKind& kind) const {
    sparse.apply(split.sparse);
    derivative.apply(split.derivative);
    deembed.apply(split.deembed);
    modes.apply(kind);
  }
};

std::string join(const std::vector<Index>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s.empty() ? "-" : s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slow/fast scale separation with Hankel DMD and multirate integration"};
  app.require_subcommand(1);

  // toy
  cli::ToyConfig toy;
  RankFlags toy_rank;
  std::string toy_out = toy.output_dir.string();
  auto* toy_cmd = app.add_subcommand("toy", "Run the y' = cos(10t) + sin(t) experiment end to end");
  toy_cmd->add_option("--t-end", toy.t_end, "Span of the generated data")->capture_default_str();
  toy_cmd->add_option("--dt", toy.dt, "Sample spacing")->capture_default_str();
  toy_cmd->add_option("--y0", toy.y0, "Initial value")->capture_default_str();
  toy_cmd->add_option("--delays", toy.pipeline.delays, "Hankel delays N")->capture_default_str();
  toy_rank.add(*toy_cmd);
  SplitFlags toy_split;
  toy_split.add(*toy_cmd, toy.pipeline.split);
  toy_cmd->add_option("--H", toy.slow_step, "Slow step")->capture_default_str();
  toy_cmd->add_option("--substeps", toy.substeps, "Fast substeps per slow step")->capture_default_str();
  Choice<solver::Scheme> toy_scheme{&kSchemes, {}};
  Choice<solver::Interpolation> toy_interp{&kInterp, {}};
  toy_scheme.add(*toy_cmd, "--scheme", "lie-trotter | strang | reference-rk4");
  toy_interp.add(*toy_cmd, "--interp", "linear | cubic");
  toy_cmd->add_option("--out", toy_out, "Output directory")->capture_default_str();

  // separate
  cli::SeparateConfig sep;
  InputFlags sep_in;
  RankFlags sep_rank;
  std::string sep_out = sep.output_dir.string();
  auto* sep_cmd = app.add_subcommand("separate", "Split CSV or gauge data into slow and fast components");
  sep_in.add(*sep_cmd);
  sep_cmd->add_option("--delays", sep.pipeline.delays, "Hankel delays N")->capture_default_str();
  sep_rank.add(*sep_cmd);
  SplitFlags sep_split;
  sep_split.add(*sep_cmd, sep.pipeline.split);
  sep_cmd->add_option("--out", sep_out, "Output directory")->capture_default_str();

  // solve
  cli::SolveConfig solve;
  std::string slow_rhs;
  std::string fast_rhs;
  std::string solve_out = solve.output.string();
  auto* solve_cmd = app.add_subcommand("solve", "Integrate y' = f_s + f_f from tabulated RHS files");
  solve_cmd->add_option("--slow-rhs", slow_rhs, "CSV of f_s")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--fast-rhs", fast_rhs, "CSV of f_f")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--time-column", solve.time_column, "Time column name in the RHS CSVs")->capture_default_str();
  solve_cmd->add_option("--column", solve.column, "Data column to use (default: first)");
  solve_cmd->add_option("--y0", solve.y0, "Initial value")->capture_default_str();
  solve_cmd->add_option("--t0", solve.t0, "Start time (default: start of the RHS data)");
  solve_cmd->add_option("--tend", solve.t_end, "End time (default: end of the RHS data)");
  solve_cmd->add_option("--H", solve.slow_step, "Slow step")->capture_default_str();
  solve_cmd->add_option("--substeps", solve.substeps, "Fast substeps per slow step")->capture_default_str();
  Choice<solver::Scheme> solve_scheme{&kSchemes, {}};
  Choice<solver::Interpolation> solve_interp{&kInterp, {}};
  solve_scheme.add(*solve_cmd, "--scheme", "lie-trotter | strang | reference-rk4");
  solve_interp.add(*solve_cmd, "--interp", "linear | cubic");
  solve_cmd->add_option("--out", solve_out, "Solution CSV")->capture_default_str();

  // dmd fit / reconstruct
  auto* dmd_cmd = app.add_subcommand("dmd", "Fit or evaluate a Hankel DMD model");
  dmd_cmd->require_subcommand(1);
  cli::DmdFitConfig fit;
  InputFlags fit_in;
  RankFlags fit_rank;
  std::string fit_out = fit.output_dir.string();
  auto* fit_cmd = dmd_cmd->add_subcommand("fit", "Fit and write a model bundle");
  fit_in.add(*fit_cmd);
  fit_cmd->add_option("--delays", fit.delays, "Hankel delays N")->capture_default_str();
  fit_rank.add(*fit_cmd);
  Choice<dmd::ModeKind> fit_modes{&kModes, {}};
  fit_modes.add(*fit_cmd, "--modes", "projected | exact");
  fit_cmd->add_option("--out", fit_out, "Model directory")->capture_default_str();

  cli::DmdReconstructConfig rec;
  std::string rec_model;
  std::string rec_out = rec.output.string();
  auto* rec_cmd = dmd_cmd->add_subcommand("reconstruct", "Evaluate a model bundle on its grid");
  rec_cmd->add_option("--model", rec_model, "Model directory")->required()->check(CLI::ExistingDirectory);
  rec_cmd->add_option("--samples", rec.samples, "Samples to reconstruct (default: training length)");
  Choice<embedding::DeembedMode> rec_deembed{&kDeembed, {}};
  rec_deembed.add(*rec_cmd, "--deembed", "first-row | antidiagonal");
  rec_cmd->add_option("--out", rec_out, "Reconstruction CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*toy_cmd) {
      toy.pipeline.rank = toy_rank.resolve(toy.pipeline.rank);
      toy.output_dir = toy_out;
      toy_split.apply(toy.pipeline.split, toy.pipeline.modes);
      toy_scheme.apply(toy.scheme);
      toy_interp.apply(toy.interpolation);
      const auto r = cli::cmd_toy(toy);
      std::cout << "rank: requested " << r.requested_rank << ", effective " << r.effective_rank << '\n'
                << "slow modes: " << join(r.slow_indices) << "\nfast modes: " << join(r.fast_indices) << '\n'
                << "max |X - X_dmd|: " << ingest::format_double(r.max_reconstruction_error) << '\n'
                << "solve: " << solver::to_string(r.multirate.scheme) << ", " << r.multirate.slow_steps
                << " slow steps x " << r.multirate.fast_substeps_per_slow << " fast substeps\n"
                << "max |y - y_exact|: " << ingest::format_double(r.max_solution_error) << '\n'
                << "|y - y_reference| at t_end: " << ingest::format_double(r.final_reference_gap) << '\n'
                << "outputs in " << toy.output_dir.string() << '\n';
    } else if (*sep_cmd) {
      sep.input = sep_in.spec();
      sep.pipeline.rank = sep_rank.resolve(sep.pipeline.rank);
      sep.output_dir = sep_out;
      sep_split.apply(sep.pipeline.split, sep.pipeline.modes);
      const auto r = cli::cmd_separate(sep);
      std::cout << "channels: " << r.result.embedding.channels << ", samples: " << r.samples
                << ", delays: " << r.result.embedding.n_delays << '\n'
                << "rank: requested " << r.result.model.requested_rank << ", effective " << r.result.model.rank
                << '\n'
                << "slow modes: " << join(r.result.split.slow_indices) << "\nfast modes: "
                << join(r.result.split.fast_indices) << '\n'
                << "max |X - X_dmd|: " << ingest::format_double(r.result.max_reconstruction_error) << '\n'
                << "outputs in " << sep.output_dir.string() << '\n';
    } else if (*solve_cmd) {
      solve.slow_rhs = slow_rhs;
      solve.fast_rhs = fast_rhs;
      solve.output = solve_out;
      solve_scheme.apply(solve.scheme);
      solve_interp.apply(solve.interpolation);
      const auto r = cli::cmd_solve(solve);
      std::cout << "scheme: " << solver::to_string(r.scheme) << "\nslow steps: " << r.slow_steps
                << " (H = " << ingest::format_double(r.slow_step) << ")\nfast substeps per slow step: "
                << r.fast_substeps_per_slow << "\nfinal value: " << ingest::format_double(r.final_value()) << '\n';
    } else if (*fit_cmd) {
      fit.input = fit_in.spec();
      fit.rank = fit_rank.resolve(fit.rank);
      fit.output_dir = fit_out;
      fit_modes.apply(fit.modes);
      const auto b = cli::cmd_dmd_fit(fit);
      std::cout << "rank: requested " << b.model.requested_rank << ", effective " << b.model.rank
                << "\nmodel written to " << fit.output_dir.string() << '\n';
    } else if (*rec_cmd) {
      rec.model_dir = rec_model;
      rec.output = rec_out;
      rec_deembed.apply(rec.deembed);
      const auto s = cli::cmd_dmd_reconstruct(rec);
      std::cout << "reconstructed " << s.channels() << " channel(s) x " << s.samples() << " samples to "
                << rec.output.string() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numeric(e.kind()) ? kExitNumeric : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
