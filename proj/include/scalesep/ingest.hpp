#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scalesep/time_series.hpp"

namespace scalesep::ingest {

/// Relative tolerance on every sample gap: |gap - dt| <= kGridTolerance * dt.
inline constexpr double kGridTolerance = 1e-8;

struct UniformGrid {
  double t0;
  double dt;
};

/// Infers (t0, dt) from strictly increasing sample times. dt is the median
/// gap, refined to the nearest double (within a few ulp) that reproduces
/// every t_k = t0 + k*dt exactly when such a value exists, so a grid written
/// from a TimeSeries reads back bit-identically. Throws NonUniformGrid with
/// the worst offending gap index otherwise.
UniformGrid infer_grid(std::span<const double> times, std::string_view source = {});

struct LabeledSeries {
  TimeSeries series;
  std::vector<std::string> channel_names;
};

/// Comma-delimited file with one header row. Every column except
/// time_column becomes a channel, in file order.
LabeledSeries load_csv_labeled(const std::filesystem::path& path, std::string_view time_column);
LabeledSeries parse_csv(std::istream& in, std::string_view time_column, std::string_view source = "<stream>");

inline TimeSeries load_csv(const std::filesystem::path& path, std::string_view time_column) {
  return load_csv_labeled(path, time_column).series;
}

/// Gauge files: '#' comment lines, whitespace-separated numeric columns,
/// column 0 is time. channel_index selects among the columns after time.
/// Channel g of the result is gauge paths[g].
TimeSeries load_gauges(std::span<const std::filesystem::path> paths, Index channel_index);

/// headers.size() must be channels + 1 (time first). Values use 17
/// significant digits so load_csv reproduces the series exactly.
void write_csv(const TimeSeries& series, const std::filesystem::path& path,
               std::span<const std::string> headers);

/// Plain numeric table, one CSV row per matrix row.
void write_table(const std::filesystem::path& path, std::span<const std::string> headers,
                 const Eigen::MatrixXd& rows);

struct NumericTable {
  std::vector<std::string> headers;
  Eigen::MatrixXd rows;
};

/// Reads a write_table file back.
NumericTable read_table(const std::filesystem::path& path);

std::string format_double(double value);

}  // namespace scalesep::ingest
