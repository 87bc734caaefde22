#include "scalesep/ingest.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "scalesep/error.hpp"

namespace scalesep::ingest {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool parse_number(std::string_view text, double& out) {
  if (text.empty()) return false;
  // from_chars rejects a leading '+', which some writers emit.
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

[[noreturn]] void malformed(std::string_view source, std::size_t line, std::size_t column,
                            std::string_view detail) {
  std::ostringstream msg;
  msg << source << ": line " << line << ", column " << column << ": " << detail;
  throw Error(ErrorKind::MalformedNumber, msg.str());
}

bool reproduces(std::span<const double> times, double t0, double dt) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (t0 + static_cast<double>(k) * dt != times[k]) return false;
  }
  return true;
}

// Smallest positive double in [lo, hi] satisfying a predicate that is monotone in dt.
template <class Pred>
double first_true(double lo, double hi, Pred pred) {
  auto bits = std::bit_cast<std::uint64_t>(lo);
  auto end = std::bit_cast<std::uint64_t>(hi);
  while (bits < end) {
    const std::uint64_t mid = bits + (end - bits) / 2;
    if (pred(std::bit_cast<double>(mid))) {
      end = mid;
    } else {
      bits = mid + 1;
    }
  }
  return std::bit_cast<double>(bits);
}

// The dt values reproducing every sample time form an interval; returns the
// member closest to `estimate`, if the interval is nonempty.
std::optional<double> reproducing_dt(std::span<const double> times, double t0, double estimate) {
  const double lo = estimate * (1.0 - 1e-9);
  const double hi = estimate * (1.0 + 1e-9);
  auto all_at_least = [&](double dt) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (t0 + static_cast<double>(k) * dt < times[k]) return false;
    }
    return true;
  };
  auto some_above = [&](double dt) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (t0 + static_cast<double>(k) * dt > times[k]) return true;
    }
    return false;
  };
  if (!all_at_least(hi) || !some_above(hi)) return std::nullopt;
  const double first = first_true(lo, hi, all_at_least);
  const double past = first_true(lo, hi, some_above);
  const double last = std::nextafter(past, 0.0);
  if (first > last || !reproduces(times, t0, first)) return std::nullopt;
  return std::clamp(estimate, first, last);
}

}  // namespace

UniformGrid infer_grid(std::span<const double> times, std::string_view source) {
  const std::size_t n = times.size();
  if (n < 2) {
    throw Error(ErrorKind::TooFewSamples,
                std::string(source) + ": need at least 2 samples, got " + std::to_string(n));
  }
  std::vector<double> gaps(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    gaps[k] = times[k + 1] - times[k];
    if (!(gaps[k] > 0.0)) {
      throw Error(ErrorKind::NonUniformGrid, std::string(source) + ": time not strictly increasing at index " +
                                                 std::to_string(k + 1));
    }
  }
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double dt_median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  std::size_t worst = 0;
  double worst_dev = 0.0;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    const double dev = std::abs(gaps[k] - dt_median);
    if (dev > worst_dev) {
      worst_dev = dev;
      worst = k;
    }
  }
  if (worst_dev > kGridTolerance * dt_median) {
    std::ostringstream msg;
    msg << source << ": gap before index " << worst + 1 << " is " << format_double(gaps[worst])
        << ", expected dt = " << format_double(dt_median);
    throw Error(ErrorKind::NonUniformGrid, msg.str());
  }

  const double t0 = times.front();
  constexpr int kUlpSearch = 16;
  const double dt_span = (times.back() - t0) / static_cast<double>(n - 1);
  for (double centre : {dt_span, dt_median}) {
    double up = centre;
    double down = centre;
    if (reproduces(times, t0, centre)) return {t0, centre};
    for (int i = 0; i < kUlpSearch; ++i) {
      up = std::nextafter(up, std::numeric_limits<double>::infinity());
      down = std::nextafter(down, 0.0);
      if (reproduces(times, t0, up)) return {t0, up};
      if (reproduces(times, t0, down)) return {t0, down};
    }
  }
  if (const auto dt = reproducing_dt(times, t0, dt_span)) return {t0, *dt};
  return {t0, dt_median};
}

LabeledSeries parse_csv(std::istream& in, std::string_view time_column, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split_commas(line)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw Error(ErrorKind::MalformedNumber, std::string(source) + ": empty input");

  const auto time_it = std::find(header.begin(), header.end(), time_column);
  if (time_it == header.end()) {
    throw Error(ErrorKind::MissingColumn,
                std::string(source) + ": no column named '" + std::string(time_column) + "'");
  }
  const auto time_idx = static_cast<std::size_t>(time_it - header.begin());
  if (header.size() < 2) throw Error(ErrorKind::MissingColumn, std::string(source) + ": no data columns");

  std::vector<double> times;
  std::vector<std::vector<double>> columns(header.size() - 1);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      malformed(source, line_no, std::min(fields.size(), header.size()) + 1,
                "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    std::size_t channel = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_number(fields[c], v)) {
        malformed(source, line_no, c + 1, "cannot parse '" + std::string(fields[c]) + "' (" + header[c] + ")");
      }
      if (c == time_idx) {
        times.push_back(v);
      } else {
        columns[channel++].push_back(v);
      }
    }
  }

  const UniformGrid grid = infer_grid(times, source);
  Eigen::MatrixXd values(static_cast<Index>(columns.size()), static_cast<Index>(times.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t k = 0; k < times.size(); ++k) values(static_cast<Index>(c), static_cast<Index>(k)) = columns[c][k];
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != time_idx) names.push_back(header[c]);
  }
  return {TimeSeries(grid.t0, grid.dt, std::move(values)), std::move(names)};
}

LabeledSeries load_csv_labeled(const std::filesystem::path& path, std::string_view time_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  return parse_csv(in, time_column, path.string());
}

namespace {

struct GaugeColumns {
  std::vector<double> times;
  std::vector<double> channel;
};

GaugeColumns read_gauge(const std::filesystem::path& path, Index channel_index) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open gauge file " + path.string());
  GaugeColumns out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_whitespace(body);
    if (columns == 0) {
      columns = fields.size();
      if (channel_index < 0 || static_cast<std::size_t>(channel_index) + 1 >= columns) {
        throw Error(ErrorKind::ColumnOutOfRange, path.string() + ": channel index " + std::to_string(channel_index) +
                                                     " but only " + std::to_string(columns - 1) +
                                                     " data column(s) after time");
      }
    } else if (fields.size() != columns) {
      malformed(path.string(), line_no, std::min(fields.size(), columns) + 1,
                "expected " + std::to_string(columns) + " columns, got " + std::to_string(fields.size()));
    }
    double t = 0.0;
    double v = 0.0;
    const auto selected = static_cast<std::size_t>(channel_index) + 1;
    if (!parse_number(fields[0], t)) malformed(path.string(), line_no, 1, "cannot parse time '" + std::string(fields[0]) + "'");
    if (!parse_number(fields[selected], v)) {
      malformed(path.string(), line_no, selected + 1, "cannot parse '" + std::string(fields[selected]) + "'");
    }
    out.times.push_back(t);
    out.channel.push_back(v);
  }
  if (out.times.empty()) throw Error(ErrorKind::EmptyGauge, path.string() + ": no data lines");
  return out;
}

}  // namespace

TimeSeries load_gauges(std::span<const std::filesystem::path> paths, Index channel_index) {
  if (paths.empty()) throw Error(ErrorKind::EmptyGauge, "no gauge files given");
  std::vector<GaugeColumns> gauges;
  gauges.reserve(paths.size());
  for (const auto& p : paths) gauges.push_back(read_gauge(p, channel_index));

  // Cross-gauge agreement first, so a shifted entry is reported as a grid
  // mismatch against gauge 0 rather than as non-uniformity of one file.
  const auto& ref = gauges.front().times;
  const double nominal_dt = ref.size() > 1 ? (ref.back() - ref.front()) / static_cast<double>(ref.size() - 1) : 0.0;
  for (std::size_t g = 1; g < gauges.size(); ++g) {
    const auto& t = gauges[g].times;
    if (t.size() != ref.size()) {
      throw Error(ErrorKind::GridMismatch, "gauge " + std::to_string(g) + " (" + paths[g].string() + ") has " +
                                               std::to_string(t.size()) + " samples, gauge 0 has " +
                                               std::to_string(ref.size()));
    }
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (std::abs(t[k] - ref[k]) > kGridTolerance * nominal_dt) {
        throw Error(ErrorKind::GridMismatch, "gauge " + std::to_string(g) + " (" + paths[g].string() +
                                                 ") first differs from gauge 0 at t = " + format_double(t[k]) +
                                                 " (gauge 0: " + format_double(ref[k]) + ")");
      }
    }
  }

  const UniformGrid grid = infer_grid(ref, paths.front().string());
  Eigen::MatrixXd values(static_cast<Index>(gauges.size()), static_cast<Index>(ref.size()));
  for (std::size_t g = 0; g < gauges.size(); ++g) {
    for (std::size_t k = 0; k < ref.size(); ++k) values(static_cast<Index>(g), static_cast<Index>(k)) = gauges[g].channel[k];
  }
  return TimeSeries(grid.t0, grid.dt, std::move(values));
}

std::string format_double(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  return out;
}

void write_header(std::ostream& out, std::span<const std::string> headers) {
  for (std::size_t c = 0; c < headers.size(); ++c) out << (c ? "," : "") << headers[c];
  out << '\n';
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
}

}  // namespace

void write_csv(const TimeSeries& series, const std::filesystem::path& path, std::span<const std::string> headers) {
  if (static_cast<Index>(headers.size()) != series.channels() + 1) {
    throw Error(ErrorKind::InvalidArgument, "write_csv: " + std::to_string(headers.size()) + " headers for " +
                                                std::to_string(series.channels()) + " channel(s) plus time");
  }
  auto out = open_for_write(path);
  write_header(out, headers);
  for (Index k = 0; k < series.samples(); ++k) {
    out << format_double(series.time(k));
    for (Index c = 0; c < series.channels(); ++c) out << ',' << format_double(series(c, k));
    out << '\n';
  }
  finish(out, path);
}

void write_table(const std::filesystem::path& path, std::span<const std::string> headers, const Eigen::MatrixXd& rows) {
  if (static_cast<Index>(headers.size()) != rows.cols()) {
    throw Error(ErrorKind::InvalidArgument, "write_table: header count does not match column count");
  }
  auto out = open_for_write(path);
  write_header(out, headers);
  for (Index r = 0; r < rows.rows(); ++r) {
    for (Index c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << format_double(rows(r, c));
    out << '\n';
  }
  finish(out, path);
}

NumericTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  NumericTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (table.headers.empty()) {
      for (auto f : fields) table.headers.emplace_back(f);
      continue;
    }
    if (fields.size() != table.headers.size()) {
      malformed(path.string(), line_no, std::min(fields.size(), table.headers.size()) + 1, "wrong field count");
    }
    auto& row = rows.emplace_back(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_number(fields[c], row[c])) malformed(path.string(), line_no, c + 1, "cannot parse '" + std::string(fields[c]) + "'");
    }
  }
  if (table.headers.empty()) throw Error(ErrorKind::MissingColumn, path.string() + ": no header row");
  table.rows.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.headers.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) table.rows(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  return table;
}

}  // namespace scalesep::ingest
