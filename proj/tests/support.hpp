#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scalesep/error.hpp"
#include "scalesep/time_series.hpp"

namespace testing {

namespace fs = std::filesystem;

// Kind of the scalesep::Error thrown by f, or "none".
template <class F>
std::string thrown_kind(F&& f) {
  try {
    f();
  } catch (const scalesep::Error& e) {
    return std::string(scalesep::to_string(e.kind()));
  } catch (const std::exception& e) {
    return std::string("foreign: ") + e.what();
  }
  return "none";
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("scalesep_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Smallest achievable max |a_i - b_pi(i)| over permutations pi. Exhaustive,
// so only for short lists.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return INFINITY;
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size() && worst < best; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline std::vector<std::complex<double>> to_list(const Eigen::VectorXcd& v) {
  return {v.data(), v.data() + v.size()};
}

// Distance from z to the nearest entry of v.
inline double nearest(const Eigen::VectorXcd& v, std::complex<double> z, Eigen::Index* where = nullptr) {
  double best = INFINITY;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::abs(v(j) - z) < best) {
      best = std::abs(v(j) - z);
      if (where) *where = j;
    }
  }
  return best;
}

inline scalesep::TimeSeries sampled(double t0, double dt, Eigen::Index n, const auto& f) {
  Eigen::MatrixXd v(1, n);
  for (Eigen::Index k = 0; k < n; ++k) v(0, k) = f(t0 + static_cast<double>(k) * dt);
  return {t0, dt, v};
}

struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::MatrixXd snapshots;
};

// Random A scaled to spectral radius 0.9..1, trajectory of 3*dim snapshots.
LinearSystem random_system(Eigen::Index dim, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(0.9, 1.0);
  LinearSystem s;
  s.a = Eigen::MatrixXd(dim, dim);
  for (Eigen::Index i = 0; i < s.a.size(); ++i) s.a.data()[i] = normal(rng);
  s.a *= radius(rng) / Eigen::EigenSolver<Eigen::MatrixXd>(s.a, false).eigenvalues().cwiseAbs().maxCoeff();
  const Eigen::Index count = 3 * dim + 1;
  s.snapshots = Eigen::MatrixXd(dim, count);
  for (Eigen::Index i = 0; i < dim; ++i) s.snapshots(i, 0) = normal(rng);
  for (Eigen::Index k = 1; k < count; ++k) s.snapshots.col(k) = s.a * s.snapshots.col(k - 1);
  return s;
}

// Synthetic gauge record: a slow drift plus a damped two-tone wave train
// arriving later at farther gauges. Both parts are finite exponential sums,
// so the ten-gauge Hankel matrix has low numerical rank.
struct GaugeModel {
  static double slow(int g, double t) { return 0.2 + 0.05 * g + 0.3 * std::sin(0.4 * t + 0.2 * g); }
  static double fast(int g, double t) {
    const double phase = 0.35 * g;
    const double scale = 1.0 / (1.0 + 0.1 * g);
    return scale * std::exp(-0.3 * t) * (std::sin(25.0 * t - 25.0 * phase) + 0.5 * std::sin(40.0 * t - 40.0 * phase));
  }
  static double vertical(int g, double t) { return slow(g, t) + fast(g, t); }
};

inline constexpr int kGaugeCount = 10;
inline constexpr int kGaugeSamples = 1000;
inline constexpr double kGaugeDt = 0.02;
inline constexpr int kVerticalVelocityColumn = 4;  // columns after time: s11 s22 s12 u v

inline std::string gauge_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

inline std::string gauge_time(int k) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", k * kGaugeDt);
  return buf;
}

// Writes gauge00001.txt .. in `dir` and returns the paths in order.
inline std::vector<fs::path> write_gauges(const fs::path& dir, int count = kGaugeCount, int samples = kGaugeSamples) {
  std::vector<fs::path> paths;
  for (int g = 0; g < count; ++g) {
    char name[32];
    std::snprintf(name, sizeof name, "gauge%05d.txt", g + 1);
    const fs::path path = dir / name;
    std::ofstream out(path);
    out << "# gauge_id=     " << g + 1 << "   location=(  " << 1.0 + 0.5 * g << "  -0.5 )  level= 1\n";
    out << "# Columns: time, sigma11, sigma22, sigma12, u, v\n";
    for (int k = 0; k < samples; ++k) {
      const double t = k * kGaugeDt;
      out << "   " << gauge_time(k) << "  " << gauge_value(std::cos(0.3 * t + g)) << "  "
          << gauge_value(0.5 * std::sin(0.7 * t)) << "  " << gauge_value(0.01 * g) << "  "
          << gauge_value(std::exp(-0.1 * t) * (g + 1)) << "  " << gauge_value(GaugeModel::vertical(g, t)) << "\n";
    }
    paths.push_back(path);
  }
  return paths;
}

// The same vertical-velocity column as a two-column CSV with identical text.
inline void write_gauge_column_csv(const fs::path& gauge, const fs::path& csv, int column) {
  std::ifstream in(gauge);
  std::ofstream out(csv);
  out << "t,v\n";
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> cols{std::istream_iterator<std::string>(fields), {}};
    out << cols[0] << "," << cols[static_cast<std::size_t>(column) + 1] << "\n";
  }
}

}  // namespace testing
