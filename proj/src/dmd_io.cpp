#include <string>

#include "scalesep/dmd.hpp"
#include "scalesep/error.hpp"
#include "scalesep/ingest.hpp"

namespace scalesep::dmd {

namespace fs = std::filesystem;

void write_bundle(const ModelBundle& bundle, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  const DmdModel& m = bundle.model;

  Eigen::MatrixXd meta(1, 7);
  meta << static_cast<double>(m.rank), static_cast<double>(m.requested_rank), m.dt, m.t0,
      static_cast<double>(bundle.channels), static_cast<double>(bundle.n_delays), static_cast<double>(bundle.samples);
  const std::vector<std::string> meta_headers{"rank", "requested_rank", "dt", "t0", "channels", "n_delays", "samples"};
  ingest::write_table(dir / "meta.csv", meta_headers, meta);

  Eigen::MatrixXd spectrum(m.rank, 9);
  for (Index j = 0; j < m.rank; ++j) {
    spectrum.row(j) << static_cast<double>(j), m.discrete_eigs(j).real(), m.discrete_eigs(j).imag(),
        m.frequencies(j).real(), m.frequencies(j).imag(), m.amplitudes(j).real(), m.amplitudes(j).imag(),
        std::abs(m.amplitudes(j)), m.singular_values(j);
  }
  const std::vector<std::string> spectrum_headers{"index", "lambda_re", "lambda_im", "omega_re", "omega_im",
                                                  "b_re",  "b_im",      "abs_b",     "sigma"};
  ingest::write_table(dir / "spectrum.csv", spectrum_headers, spectrum);

  Eigen::MatrixXd modes(m.rows(), 2 * m.rank);
  std::vector<std::string> mode_headers;
  for (Index j = 0; j < m.rank; ++j) {
    modes.col(2 * j) = m.modes.col(j).real();
    modes.col(2 * j + 1) = m.modes.col(j).imag();
    mode_headers.push_back("re_" + std::to_string(j));
    mode_headers.push_back("im_" + std::to_string(j));
  }
  ingest::write_table(dir / "modes.csv", mode_headers, modes);
}

ModelBundle read_bundle(const fs::path& dir) {
  const auto meta = ingest::read_table(dir / "meta.csv");
  if (meta.rows.rows() != 1 || meta.rows.cols() != 7) throw Error(ErrorKind::ShapeMismatch, "meta.csv must have one 7-column row");
  ModelBundle b;
  DmdModel& m = b.model;
  m.rank = static_cast<Index>(meta.rows(0, 0));
  m.requested_rank = static_cast<Index>(meta.rows(0, 1));
  m.dt = meta.rows(0, 2);
  m.t0 = meta.rows(0, 3);
  b.channels = static_cast<Index>(meta.rows(0, 4));
  b.n_delays = static_cast<Index>(meta.rows(0, 5));
  b.samples = static_cast<Index>(meta.rows(0, 6));

  const auto spectrum = ingest::read_table(dir / "spectrum.csv");
  const auto modes = ingest::read_table(dir / "modes.csv");
  if (spectrum.rows.rows() != m.rank || spectrum.rows.cols() != 9 || modes.rows.cols() != 2 * m.rank ||
      modes.rows.rows() != b.channels * b.n_delays) {
    throw Error(ErrorKind::ShapeMismatch, "model bundle in " + dir.string() + " is inconsistent");
  }
  m.discrete_eigs.resize(m.rank);
  m.frequencies.resize(m.rank);
  m.amplitudes.resize(m.rank);
  m.singular_values.resize(m.rank);
  m.modes.resize(modes.rows.rows(), m.rank);
  for (Index j = 0; j < m.rank; ++j) {
    m.discrete_eigs(j) = {spectrum.rows(j, 1), spectrum.rows(j, 2)};
    m.frequencies(j) = {spectrum.rows(j, 3), spectrum.rows(j, 4)};
    m.amplitudes(j) = {spectrum.rows(j, 5), spectrum.rows(j, 6)};
    m.singular_values(j) = spectrum.rows(j, 8);
    for (Index r = 0; r < m.modes.rows(); ++r) m.modes(r, j) = {modes.rows(r, 2 * j), modes.rows(r, 2 * j + 1)};
  }
  return b;
}

}  // namespace scalesep::dmd
