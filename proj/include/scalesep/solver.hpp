#pragma once

#include <functional>
#include <numbers>
#include <string_view>
#include <vector>

#include "scalesep/time_series.hpp"

namespace scalesep::solver {

/// Right-hand side f(t, y). The extracted components only depend on t; the
/// state argument is kept for state-dependent callers.
using RhsFunction = std::function<double(double t, double y)>;

enum class Interpolation {
  linear,
  cubic,  // piecewise Hermite, fourth-order finite-difference slopes
};

/// One-channel samples of a right-hand side, interpolated on their span.
class TabulatedRhs {
 public:
  explicit TabulatedRhs(TimeSeries samples, Interpolation interpolation = Interpolation::cubic);

  /// Throws OutOfRange outside [t_start, t_end] (no extrapolation).
  double operator()(double t) const;
  double operator()(double t, double /*y*/) const { return (*this)(t); }

  double t_start() const noexcept { return grid_.t0(); }
  double t_end() const noexcept { return grid_.t_end(); }
  const TimeSeries& grid() const noexcept { return grid_; }
  Interpolation interpolation() const noexcept { return interpolation_; }

 private:
  TimeSeries grid_;
  Interpolation interpolation_;
  std::vector<double> slopes_;
};

double eval_rhs(const TabulatedRhs& rhs, double t);

enum class Scheme { lie_trotter, strang, reference_rk4 };

std::string_view to_string(Scheme scheme) noexcept;

struct SolveResult {
  TimeSeries solution;  // one sample per slow step boundary, t0 .. t_end
  Index slow_steps = 0;
  Index fast_substeps_per_slow = 0;
  double slow_step = 0.0;  // step actually taken
  Scheme scheme = Scheme::lie_trotter;

  double final_value() const { return solution(0, solution.samples() - 1); }
};

// The toy problem y' = cos(10 t) + sin(t).
inline constexpr double kToyDt = 0.01;
inline constexpr double kToyY0 = 1.0;
inline constexpr double kToyTEnd = 4.0 * std::numbers::pi;

double toy_slow_rhs(double t);  // sin(t)
double toy_fast_rhs(double t);  // cos(10 t)
double toy_exact(double t, double y0 = kToyY0);

/// Classical RK4 solution of the toy problem on t_k = k*dt, k <= t_end/dt.
TimeSeries generate_toy(double t_end = kToyTEnd, double dt = kToyDt, double y0 = kToyY0);

/// One classical RK4 step.
double rk4_step(const RhsFunction& f, double t, double y, double h);

/// Multirate split integration of y' = fs + ff. The span is divided into
/// ceil((t_end - t0)/H) equal slow steps of size <= H. Each slow step
/// evaluates the slow tendency with an explicit midpoint stage, and the fast
/// part is swept with `substeps` RK4 steps of size H/substeps. Lie-Trotter
/// applies the whole slow increment before the sweep. Strang applies half
/// before the sweep and half after it, re-evaluating the tendency at the
/// midpoint time with the post-sweep state. Both schemes see identical slow
/// forcing when fs depends on t only.
SolveResult solve_multirate(const RhsFunction& fs, const RhsFunction& ff, double y0, double t0, double t_end,
                            double slow_step, Index substeps, Scheme scheme);
SolveResult solve_multirate(const TabulatedRhs& fs, const TabulatedRhs& ff, double y0, double t0, double t_end,
                            double slow_step, Index substeps, Scheme scheme);

/// Single-rate RK4 on fs + ff with steps of size <= h.
SolveResult solve_reference(const RhsFunction& fs, const RhsFunction& ff, double y0, double t0, double t_end,
                            double h);
SolveResult solve_reference(const TabulatedRhs& fs, const TabulatedRhs& ff, double y0, double t0, double t_end,
                            double h);

}  // namespace scalesep::solver
