#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>

#include "scalesep/ingest.hpp"
#include "scalesep/solver.hpp"
#include "support.hpp"

using namespace scalesep;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(const testing::TempDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + SCALESEP_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, testing::read_text(out), testing::read_text(err)};
}

}  // namespace

TEST_CASE("toy subcommand succeeds and reports ranks") {
  testing::TempDir dir("cli");
  const auto r = run(dir, "toy --out \"" + (dir / "toy").string() + "\"");
  CHECK(r.status == 0);
  CHECK(r.out.find("rank: requested 20, effective 5") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "toy" / "solution.csv"));
}

TEST_CASE("toy with rank 3 warns but exits 0") {
  testing::TempDir dir("cli3");
  const auto r = run(dir, "toy --rank 3 --out \"" + (dir / "toy").string() + "\"");
  CHECK(r.status == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("input errors exit 2") {
  testing::TempDir dir("clie");
  CHECK(run(dir, "toy --delays 5000 --out \"" + (dir / "x").string() + "\"").status == 2);
  CHECK(run(dir, "separate --input /nonexistent.csv").status == 2);
  CHECK(run(dir, "toy --rank 3 --rank-rel 0.1").status == 2);
  CHECK(run(dir, "toy --scheme nope").status == 2);
  CHECK(run(dir, "").status == 2);

  testing::write_text(dir / "empty.csv", "");
  CHECK(run(dir, "separate --input \"" + (dir / "empty.csv").string() + "\" --out \"" + (dir / "o").string() + "\"")
            .status == 2);
  testing::write_text(dir / "g.txt", "# nothing\n");
  CHECK(run(dir, "separate --gauge \"" + (dir / "g.txt").string() + "\" --out \"" + (dir / "o").string() + "\"")
            .status == 2);
}

TEST_CASE("solve subcommand and span errors") {
  testing::TempDir dir("clis");
  const auto fs = testing::sampled(0.0, 0.01, 401, [](double t) { return std::sin(t); });
  const auto ff = testing::sampled(0.0, 0.01, 401, [](double t) { return std::cos(10 * t); });
  const std::vector<std::string> headers{"t", "y"};
  ingest::write_csv(fs, dir / "fs.csv", headers);
  ingest::write_csv(ff, dir / "ff.csv", headers);
  const std::string files = "--slow-rhs \"" + (dir / "fs.csv").string() + "\" --fast-rhs \"" + (dir / "ff.csv").string() + "\"";

  const auto ok = run(dir, "solve " + files + " --y0 1 --out \"" + (dir / "sol.csv").string() + "\"");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("slow steps: 40") != std::string::npos);
  const auto sol = ingest::load_csv(dir / "sol.csv", "t");
  const solver::TabulatedRhs fs_rhs(fs, solver::Interpolation::cubic);
  const solver::TabulatedRhs ff_rhs(ff, solver::Interpolation::cubic);
  CHECK(sol == solver::solve_multirate(fs_rhs, ff_rhs, 1.0, 0.0, 4.0, 0.1, 10, solver::Scheme::lie_trotter).solution);
  for (Index k = 0; k < sol.samples(); ++k) CHECK(std::abs(sol(0, k) - solver::toy_exact(sol.time(k))) < 1e-3);

  const auto span = run(dir, "solve " + files + " --tend 5 --out \"" + (dir / "bad.csv").string() + "\"");
  CHECK(span.status == 2);
  CHECK(span.err.find("OutOfRange") != std::string::npos);
}

TEST_CASE("numeric failures exit 3") {
  testing::TempDir dir("clin");
  // Exponential growth e^{2t}; reconstructing far past the training window overflows.
  const auto s = testing::sampled(0.0, 0.1, 60, [](double t) { return std::exp(2.0 * t); });
  const std::vector<std::string> headers{"t", "y"};
  ingest::write_csv(s, dir / "grow.csv", headers);
  const auto model = dir / "model";
  CHECK(run(dir, "dmd fit --input \"" + (dir / "grow.csv").string() + "\" --delays 3 --rank 1 --out \"" +
                     model.string() + "\"")
            .status == 0);
  CHECK(run(dir, "dmd reconstruct --model \"" + model.string() + "\" --out \"" + (dir / "ok.csv").string() + "\"")
            .status == 0);
  const auto far = run(dir, "dmd reconstruct --model \"" + model.string() + "\" --samples 4000 --out \"" +
                                (dir / "far.csv").string() + "\"");
  CHECK(far.status == 3);
  CHECK(far.err.find("NumericOverflow") != std::string::npos);
}
