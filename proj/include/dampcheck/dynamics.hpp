#pragma once

// Equation-of-motion right-hand sides, a fixed-step RK4 integrator and the
// residual checker that certifies or falsifies closed-form curves.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dampcheck/analytic.hpp"
#include "dampcheck/core.hpp"

namespace dampcheck {

/// LiuEq1: p' = -x - gamma p with omega0 = 1 (gamma as written there).
/// ZimmerCorrected: p' = -omega0^2 x - 2 gamma p.
enum class Convention { LiuEq1, ZimmerCorrected };

inline std::string_view to_string(Convention c) {
  return c == Convention::LiuEq1 ? "LiuEq1" : "ZimmerCorrected";
}

/// Corrected-convention parameters equivalent to a LiuEq1 damping value.
inline OscillatorParams from_liu_gamma(double liu_gamma) {
  return OscillatorParams(1.0, liu_gamma / 2.0);
}

struct Derivative {
  double dxdt;
  double dpdt;
  friend bool operator==(const Derivative&, const Derivative&) = default;
};

inline void require_compatible(const OscillatorParams& params, Convention conv) {
  if (conv == Convention::LiuEq1 && params.omega0() != 1.0) {
    throw ConventionError("LiuEq1 convention fixes omega0 = 1 (got " +
                          std::to_string(params.omega0()) + ")");
  }
}

inline Derivative eom_rhs(double x, double p, const OscillatorParams& params, Convention conv) {
  require_compatible(params, conv);
  const double g = params.gamma();
  if (conv == Convention::LiuEq1) return {p, -x - g * p};
  const double w0 = params.omega0();
  return {p, -(w0 * w0) * x - 2.0 * g * p};
}

inline Derivative eom_rhs(const PhaseState& s, const OscillatorParams& params, Convention conv) {
  return eom_rhs(s.x, s.p, params, conv);
}

/// Classic fixed-step RK4 from init.t to t_end. The final step is shortened
/// so the last sample lands exactly on t_end.
inline Trajectory integrate_rk4(const OscillatorParams& params, Convention conv,
                                const PhaseState& init, double t_end, double dt) {
  require_compatible(params, conv);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be finite and > 0");
  if (!(t_end > init.t) || !std::isfinite(t_end)) throw InvalidArgument("t_end must exceed init.t");
  if (!init.finite()) throw InvalidArgument("initial state must be finite");

  const double span = t_end - init.t;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));

  std::vector<PhaseState> out;
  out.reserve(steps + 1);
  out.push_back(init);
  double x = init.x;
  double p = init.p;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = init.t + dt * static_cast<double>(k);
    const bool last = k + 1 == steps;
    const double h = last ? t_end - t : dt;
    const Derivative k1 = eom_rhs(x, p, params, conv);
    const Derivative k2 = eom_rhs(x + 0.5 * h * k1.dxdt, p + 0.5 * h * k1.dpdt, params, conv);
    const Derivative k3 = eom_rhs(x + 0.5 * h * k2.dxdt, p + 0.5 * h * k2.dpdt, params, conv);
    const Derivative k4 = eom_rhs(x + h * k3.dxdt, p + h * k3.dpdt, params, conv);
    x += h / 6.0 * (k1.dxdt + 2.0 * k2.dxdt + 2.0 * k3.dxdt + k4.dxdt);
    p += h / 6.0 * (k1.dpdt + 2.0 * k2.dpdt + 2.0 * k3.dpdt + k4.dpdt);
    if (!std::isfinite(x) || !std::isfinite(p)) {
      throw NumericalError("non-finite state at step " + std::to_string(k + 1));
    }
    out.push_back({last ? t_end : init.t + dt * static_cast<double>(k + 1), x, p});
  }
  return Trajectory(params, std::move(out));
}

enum class Verdict { Satisfies, Violates };

inline std::string_view to_string(Verdict v) {
  return v == Verdict::Satisfies ? "satisfies" : "violates";
}

/// Analytic uses the curve's stored derivatives; CentralDifference
/// differentiates x(t), p(t) numerically to cross-check those formulas.
enum class DerivativeMode { Analytic, CentralDifference };

inline constexpr double kDefaultResidualThreshold = 1e-8;

struct ResidualReport {
  double max_abs_residual_x = 0.0;
  double max_abs_residual_p = 0.0;
  double argmax_t = 0.0;  // time of the largest residual of either kind
  double threshold = kDefaultResidualThreshold;
  Verdict verdict = Verdict::Satisfies;
  // Signed residuals at each grid time, in grid order.
  std::vector<double> residual_x;
  std::vector<double> residual_p;

  [[nodiscard]] double max_abs_residual() const {
    return std::max(max_abs_residual_x, max_abs_residual_p);
  }
};

/// residual_x = dx/dt - p, residual_p = dp/dt - rhs_p(x, p).
inline ResidualReport residual_check(const ClosedFormCurve& c, Convention conv,
                                     const std::vector<double>& t_grid,
                                     double threshold = kDefaultResidualThreshold,
                                     DerivativeMode mode = DerivativeMode::Analytic) {
  if (t_grid.empty()) throw InvalidArgument("residual check needs at least one time");
  if (!(threshold >= 0.0)) throw InvalidArgument("threshold must be >= 0");
  require_compatible(c.params(), conv);

  ResidualReport rep;
  rep.threshold = threshold;
  rep.residual_x.reserve(t_grid.size());
  rep.residual_p.reserve(t_grid.size());
  double worst = -1.0;
  for (double t : t_grid) {
    const auto pt = c.at(t);
    double dx = pt.dxdt;
    double dp = pt.dpdt;
    if (mode == DerivativeMode::CentralDifference) {
      const double h = 1e-6 * std::max(1.0, std::abs(t));
      const auto hi = c.at(t + h);
      const auto lo = c.at(t - h);
      dx = (hi.x - lo.x) / (2.0 * h);
      dp = (hi.p - lo.p) / (2.0 * h);
    }
    const Derivative rhs = eom_rhs(pt.x, pt.p, c.params(), conv);
    const double rx = dx - pt.p;
    const double rp = dp - rhs.dpdt;
    rep.residual_x.push_back(rx);
    rep.residual_p.push_back(rp);
    rep.max_abs_residual_x = std::max(rep.max_abs_residual_x, std::abs(rx));
    rep.max_abs_residual_p = std::max(rep.max_abs_residual_p, std::abs(rp));
    const double local = std::max(std::abs(rx), std::abs(rp));
    if (local > worst) {
      worst = local;
      rep.argmax_t = t;
    }
  }
  const bool ok = rep.max_abs_residual_x <= threshold && rep.max_abs_residual_p <= threshold;
  rep.verdict = ok ? Verdict::Satisfies : Verdict::Violates;
  return rep;
}

/// CSV with header `t,x,p` and 17 significant digits.
inline void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  os << "t,x,p\n" << std::setprecision(17);
  for (const auto& s : traj) os << s.t << ',' << s.x << ',' << s.p << '\n';
}

inline void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  write_trajectory_csv(traj, f);
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace dampcheck
