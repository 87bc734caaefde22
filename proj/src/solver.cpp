#include "scalesep/solver.hpp"

#include <cmath>
#include <string>

#include "scalesep/error.hpp"

namespace scalesep::solver {
namespace {

// Fourth-order slopes where 5 samples are available, lower order otherwise.
std::vector<double> hermite_slopes(const Eigen::RowVectorXd& y, double dt) {
  const Index n = y.size();
  std::vector<double> m(static_cast<std::size_t>(n));
  auto at = [&](Index k) -> double& { return m[static_cast<std::size_t>(k)]; };
  if (n == 2) {
    at(0) = at(1) = (y(1) - y(0)) / dt;
    return m;
  }
  if (n < 5) {
    at(0) = (-3.0 * y(0) + 4.0 * y(1) - y(2)) / (2.0 * dt);
    for (Index k = 1; k + 1 < n; ++k) at(k) = (y(k + 1) - y(k - 1)) / (2.0 * dt);
    at(n - 1) = (3.0 * y(n - 1) - 4.0 * y(n - 2) + y(n - 3)) / (2.0 * dt);
    return m;
  }
  const double s = 1.0 / (12.0 * dt);
  at(0) = (-25.0 * y(0) + 48.0 * y(1) - 36.0 * y(2) + 16.0 * y(3) - 3.0 * y(4)) * s;
  at(1) = (-3.0 * y(0) - 10.0 * y(1) + 18.0 * y(2) - 6.0 * y(3) + y(4)) * s;
  for (Index k = 2; k + 2 < n; ++k) at(k) = (y(k - 2) - 8.0 * y(k - 1) + 8.0 * y(k + 1) - y(k + 2)) * s;
  at(n - 2) = (3.0 * y(n - 1) + 10.0 * y(n - 2) - 18.0 * y(n - 3) + 6.0 * y(n - 4) - y(n - 5)) * s;
  at(n - 1) = (25.0 * y(n - 1) - 48.0 * y(n - 2) + 36.0 * y(n - 3) - 16.0 * y(n - 4) + 3.0 * y(n - 5)) * s;
  return m;
}

struct StepPlan {
  Index steps;
  double step;
};

StepPlan plan_steps(double t0, double t_end, double max_step) {
  if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t_end > t0)) {
    throw Error(ErrorKind::InvalidSpan, "need finite t0 < t_end");
  }
  if (!(max_step > 0.0) || !std::isfinite(max_step)) throw Error(ErrorKind::InvalidStep, "step must be positive");
  const double q = (t_end - t0) / max_step;
  const double nearest = std::round(q);
  const double count = (nearest >= 1.0 && std::abs(q - nearest) <= 1e-9 * q) ? nearest : std::ceil(q);
  const auto steps = static_cast<Index>(count);
  return {steps, (t_end - t0) / static_cast<double>(steps)};
}

double step_time(double t0, double t_end, const StepPlan& plan, Index n) {
  return n == plan.steps ? t_end : t0 + static_cast<double>(n) * plan.step;
}

void check_span(const TabulatedRhs& rhs, std::string_view name, double t0, double t_end) {
  const double tol = 1e-9 * rhs.grid().dt();
  if (t0 < rhs.t_start() - tol || t_end > rhs.t_end() + tol) {
    throw Error(ErrorKind::OutOfRange, std::string(name) + " covers [" + std::to_string(rhs.t_start()) + ", " +
                                           std::to_string(rhs.t_end()) + "], solve requested [" +
                                           std::to_string(t0) + ", " + std::to_string(t_end) + "]");
  }
}

}  // namespace

TabulatedRhs::TabulatedRhs(TimeSeries samples, Interpolation interpolation)
    : grid_(std::move(samples)), interpolation_(interpolation) {
  if (grid_.channels() != 1) {
    throw Error(ErrorKind::ShapeMismatch,
                "tabulated RHS needs exactly one channel, got " + std::to_string(grid_.channels()));
  }
  if (interpolation_ == Interpolation::cubic) slopes_ = hermite_slopes(grid_.values().row(0), grid_.dt());
}

double TabulatedRhs::operator()(double t) const {
  const double dt = grid_.dt();
  const double tol = 1e-9 * dt;
  if (!(t >= t_start() - tol && t <= t_end() + tol)) {
    throw Error(ErrorKind::OutOfRange, "t = " + std::to_string(t) + " outside tabulated span [" +
                                           std::to_string(t_start()) + ", " + std::to_string(t_end()) + "]");
  }
  const Index n = grid_.samples();
  const auto& y = grid_.values();
  Index k = static_cast<Index>(std::floor((t - t_start()) / dt));
  k = std::clamp<Index>(k, 0, n - 2);
  if (t == grid_.time(k + 1)) return y(0, k + 1);
  const double s = std::clamp((t - grid_.time(k)) / dt, 0.0, 1.0);
  if (interpolation_ == Interpolation::linear) return (1.0 - s) * y(0, k) + s * y(0, k + 1);

  const double s2 = s * s;
  const double u = 1.0 - s;
  const double h00 = (1.0 + 2.0 * s) * u * u;
  const double h10 = s * u * u;
  const double h01 = s2 * (3.0 - 2.0 * s);
  const double h11 = -s2 * u;
  return h00 * y(0, k) + h10 * dt * slopes_[static_cast<std::size_t>(k)] + h01 * y(0, k + 1) +
         h11 * dt * slopes_[static_cast<std::size_t>(k + 1)];
}

double eval_rhs(const TabulatedRhs& rhs, double t) { return rhs(t); }

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::lie_trotter: return "lie-trotter";
    case Scheme::strang: return "strang";
    case Scheme::reference_rk4: return "reference-rk4";
  }
  return "unknown";
}

double toy_slow_rhs(double t) { return std::sin(t); }
double toy_fast_rhs(double t) { return std::cos(10.0 * t); }
double toy_exact(double t, double y0) { return y0 + std::sin(10.0 * t) / 10.0 + 1.0 - std::cos(t); }

double rk4_step(const RhsFunction& f, double t, double y, double h) {
  const double k1 = f(t, y);
  const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const double k4 = f(t + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

TimeSeries generate_toy(double t_end, double dt, double y0) {
  if (!(dt > 0.0) || !(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::InvalidSpan, "toy problem needs dt > 0 and t_end > 0");
  }
  const auto steps = static_cast<Index>(std::floor(t_end / dt + 1e-9));
  if (steps < 1) throw Error(ErrorKind::InvalidSpan, "t_end shorter than one step");
  const RhsFunction f = [](double t, double) { return toy_fast_rhs(t) + toy_slow_rhs(t); };
  Eigen::MatrixXd y(1, steps + 1);
  y(0, 0) = y0;
  for (Index k = 0; k < steps; ++k) y(0, k + 1) = rk4_step(f, static_cast<double>(k) * dt, y(0, k), dt);
  return TimeSeries(0.0, dt, std::move(y));
}

SolveResult solve_multirate(const RhsFunction& fs, const RhsFunction& ff, double y0, double t0, double t_end,
                            double slow_step, Index substeps, Scheme scheme) {
  if (substeps < 1) throw Error(ErrorKind::InvalidStep, "need at least one fast substep");
  if (scheme == Scheme::reference_rk4) {
    return solve_reference(fs, ff, y0, t0, t_end, slow_step / static_cast<double>(substeps));
  }
  const StepPlan plan = plan_steps(t0, t_end, slow_step);
  const double H = plan.step;
  const double h = H / static_cast<double>(substeps);

  Eigen::MatrixXd out(1, plan.steps + 1);
  double y = y0;
  out(0, 0) = y;
  for (Index n = 0; n < plan.steps; ++n) {
    const double t = step_time(t0, t_end, plan, n);
    // Explicit midpoint stage for the slow tendency.
    const double k1 = fs(t, y);
    const double slow_tendency = fs(t + 0.5 * H, y + 0.5 * H * k1);

    y += (scheme == Scheme::strang ? 0.5 : 1.0) * H * slow_tendency;
    for (Index i = 0; i < substeps; ++i) y = rk4_step(ff, t + static_cast<double>(i) * h, y, h);
    if (scheme == Scheme::strang) y += 0.5 * H * fs(t + 0.5 * H, y);
    out(0, n + 1) = y;
  }
  return {TimeSeries(t0, H, std::move(out)), plan.steps, substeps, H, scheme};
}

SolveResult solve_multirate(const TabulatedRhs& fs, const TabulatedRhs& ff, double y0, double t0, double t_end,
                            double slow_step, Index substeps, Scheme scheme) {
  check_span(fs, "slow RHS", t0, t_end);
  check_span(ff, "fast RHS", t0, t_end);
  return solve_multirate(RhsFunction(fs), RhsFunction(ff), y0, t0, t_end, slow_step, substeps, scheme);
}

SolveResult solve_reference(const RhsFunction& fs, const RhsFunction& ff, double y0, double t0, double t_end,
                            double h) {
  const StepPlan plan = plan_steps(t0, t_end, h);
  const RhsFunction f = [&](double t, double y) { return fs(t, y) + ff(t, y); };
  Eigen::MatrixXd out(1, plan.steps + 1);
  double y = y0;
  out(0, 0) = y;
  for (Index n = 0; n < plan.steps; ++n) {
    y = rk4_step(f, step_time(t0, t_end, plan, n), y, plan.step);
    out(0, n + 1) = y;
  }
  return {TimeSeries(t0, plan.step, std::move(out)), plan.steps, 1, plan.step, Scheme::reference_rk4};
}

SolveResult solve_reference(const TabulatedRhs& fs, const TabulatedRhs& ff, double y0, double t0, double t_end,
                            double h) {
  check_span(fs, "slow RHS", t0, t_end);
  check_span(ff, "fast RHS", t0, t_end);
  return solve_reference(RhsFunction(fs), RhsFunction(ff), y0, t0, t_end, h);
}

}  // namespace scalesep::solver
