#pragma once

// Conserved quantities of the damped oscillator and their multivalued
// structure: the H1 invariant with Riemann-sheet unwrapping, its gamma-scaled
// form, the shear-coordinate constant r and the undamped energy.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "dampcheck/analytic.hpp"
#include "dampcheck/core.hpp"

namespace dampcheck {

namespace detail {

inline void require_off_origin(double x, double p) {
  if (x == 0.0 && p == 0.0) throw OriginError("angle is undefined at the phase-space origin");
}

inline void require_positive_gamma(double gamma) {
  if (gamma == 0.0) throw SingularityError("H1 is singular at gamma = 0");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
}

}  // namespace detail

/// atan2(p, x) in (-pi, pi]; -pi is reported as +pi.
inline double principal_angle(double x, double p) {
  detail::require_off_origin(x, p);
  return to_principal_range(std::atan2(p, x));
}

/// Principal angle plus a Riemann-sheet count. unwrapped() is always exactly
/// principal + 2 pi sheet; the sheet is derived, never tracked separately.
class SheetTracker {
 public:
  SheetTracker() = default;
  explicit SheetTracker(double principal, long sheet = 0) : principal_(principal), sheet_(sheet) {}

  /// Tracker positioned on the sheet where the continuous angle equals `unwrapped`.
  static SheetTracker from_unwrapped(double unwrapped) {
    const double principal = to_principal_range(std::remainder(unwrapped, kTwoPi));
    const auto sheet = std::lround((unwrapped - principal) / kTwoPi);
    return SheetTracker(principal, sheet);
  }

  [[nodiscard]] double principal() const noexcept { return principal_; }
  [[nodiscard]] long sheet() const noexcept { return sheet_; }
  [[nodiscard]] double unwrapped() const noexcept {
    return principal_ + kTwoPi * static_cast<double>(sheet_);
  }

 private:
  double principal_ = 0.0;
  long sheet_ = 0;
};

/// Minimal-jump rule: the representative new_principal + 2 pi k closest to
/// the previous unwrapped angle.
inline SheetTracker unwrap_step(const SheetTracker& tracker, double new_principal) {
  if (!(new_principal > -kPi && new_principal <= kPi)) {
    throw InvalidArgument("principal angle must lie in (-pi, pi]");
  }
  const auto k = std::lround((tracker.unwrapped() - new_principal) / kTwoPi);
  return SheetTracker(new_principal, k);
}

/// Values of an invariant sampled along a path.
struct InvariantSeries {
  std::vector<double> t;
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

  [[nodiscard]] double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
  }
  [[nodiscard]] double max_deviation_from_mean() const {
    const double m = mean();
    double d = 0.0;
    for (double v : values) d = std::max(d, std::abs(v - m));
    return d;
  }
  /// Conservation measure: max |value(t) - value(t0)|.
  [[nodiscard]] double max_deviation_from_initial() const {
    double d = 0.0;
    for (double v : values) d = std::max(d, std::abs(v - values.front()));
    return d;
  }
  [[nodiscard]] double range() const {
    if (values.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
  }
};

/// H1 as published: principal angle + log(radius) / gamma, no sheet term.
inline double h1_naive(double x, double p, double gamma) {
  detail::require_positive_gamma(gamma);
  return principal_angle(x, p) + std::log(std::hypot(x, p)) / gamma;
}

/// gamma * H1 = gamma * angle + log(radius); finite at gamma = 0.
inline double gamma_h1(double x, double p, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
  return gamma * principal_angle(x, p) + std::log(std::hypot(x, p));
}

inline double energy_undamped(double x, double p, double omega0) {
  return 0.5 * (p * p + omega0 * omega0 * x * x);
}

/// phi + log(A) / gamma: H1 of the curve with amplitude A and phase phi.
inline double generalized_h1(double amplitude, double phi, double gamma) {
  if (!(amplitude > 0.0)) throw InvalidArgument("amplitude must be > 0");
  detail::require_positive_gamma(gamma);
  return phi + std::log(amplitude) / gamma;
}

namespace detail {

inline double require_oscillating(const OscillatorParams& params) {
  if (!oscillates(classify_regime(params))) {
    throw RegimeError("constant r is defined only for gamma < omega0 (got " +
                      std::string(to_string(classify_regime(params))) + ")");
  }
  return pseudo_frequency(params);
}

}  // namespace detail

/// Principal value of the shear angle: atan2(gamma x + p, omega x).
inline double shear_angle(double x, double p, const OscillatorParams& params) {
  const double w = detail::require_oscillating(params);
  detail::require_off_origin(x, p);
  return to_principal_range(std::atan2(params.gamma() * x + p, w * x));
}

/// r with a caller-supplied continuous shear angle phi:
/// log[w^2 x^2 + (g x + p)^2] - 2 (g / w) phi.
inline double r_zimmer_unwrapped(double x, double p, const OscillatorParams& params,
                                 double unwrapped_phi) {
  const double w = detail::require_oscillating(params);
  detail::require_off_origin(x, p);
  const double g = params.gamma();
  const double shear = g * x + p;
  return std::log(w * w * x * x + shear * shear) - 2.0 * (g / w) * unwrapped_phi;
}

/// Point form: principal phi with an explicit sheet number n, entering as
/// (phi - 2 pi n). A single point cannot determine its own sheet.
inline double r_zimmer(double x, double p, const OscillatorParams& params, long sheet = 0) {
  return r_zimmer_unwrapped(x, p, params,
                            shear_angle(x, p, params) - kTwoPi * static_cast<double>(sheet));
}

namespace detail {

/// Unwraps principal angles along a trajectory, rejecting steps of pi or more.
template <typename AngleFn>
std::vector<double> unwrap_along(const Trajectory& traj, AngleFn&& angle_of) {
  std::vector<double> out;
  out.reserve(traj.size());
  SheetTracker tracker(angle_of(traj.front()), 0);
  out.push_back(tracker.unwrapped());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const SheetTracker next = unwrap_step(tracker, angle_of(traj.samples()[i]));
    if (std::abs(next.unwrapped() - tracker.unwrapped()) >= kPi) {
      throw SamplingError("angle changes by pi or more between t=" +
                          std::to_string(traj.samples()[i - 1].t) + " and t=" +
                          std::to_string(traj.samples()[i].t));
    }
    tracker = next;
    out.push_back(tracker.unwrapped());
  }
  return out;
}

}  // namespace detail

/// Unwrapped (x, p) angle along a trajectory, starting on sheet 0.
inline std::vector<double> unwrapped_angles(const Trajectory& traj) {
  return detail::unwrap_along(traj, [](const PhaseState& s) { return principal_angle(s.x, s.p); });
}

/// H1 = [theta] + 2 pi n + log(radius) / gamma along a trajectory.
inline InvariantSeries h1_unwrapped(const Trajectory& traj, double gamma) {
  detail::require_positive_gamma(gamma);
  const auto theta = unwrapped_angles(traj);
  InvariantSeries out;
  out.t.reserve(traj.size());
  out.values.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj.samples()[i];
    out.t.push_back(s.t);
    out.values.push_back(theta[i] + std::log(std::hypot(s.x, s.p)) / gamma);
  }
  return out;
}

/// h1_naive evaluated pointwise along a trajectory.
inline InvariantSeries h1_naive_series(const Trajectory& traj, double gamma) {
  InvariantSeries out;
  for (const auto& s : traj) {
    out.t.push_back(s.t);
    out.values.push_back(h1_naive(s.x, s.p, gamma));
  }
  return out;
}

/// r along a trajectory with the shear angle unwrapped from sheet 0.
inline InvariantSeries r_zimmer_series(const Trajectory& traj) {
  const OscillatorParams& params = traj.params();
  const auto phi = detail::unwrap_along(
      traj, [&](const PhaseState& s) { return shear_angle(s.x, s.p, params); });
  InvariantSeries out;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj.samples()[i];
    out.t.push_back(s.t);
    out.values.push_back(r_zimmer_unwrapped(s.x, s.p, params, phi[i]));
  }
  return out;
}

/// Jump of f across the negative x-axis at the given radius:
/// f(theta = pi^-) - f(theta = (-pi)^+), Richardson-extrapolated to eps -> 0.
template <typename Invariant>
double branch_jump(Invariant&& f, double radius, double eps = 1e-9) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be > 0");
  const auto one_sided = [&](double e) {
    const double above = f(radius * std::cos(kPi - e), radius * std::sin(kPi - e));
    const double below = f(radius * std::cos(-kPi + e), radius * std::sin(-kPi + e));
    return above - below;
  };
  return 2.0 * one_sided(eps) - one_sided(2.0 * eps);
}

inline double branch_jump_h1(double gamma, double radius) {
  detail::require_positive_gamma(gamma);
  return branch_jump([gamma](double x, double p) { return h1_naive(x, p, gamma); }, radius);
}

/// CSV with header `t,value` and 17 significant digits.
inline void write_series_csv(const InvariantSeries& s, std::ostream& os) {
  os << "t,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i) os << s.t[i] << ',' << s.values[i] << '\n';
}

inline void write_series_csv(const InvariantSeries& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  write_series_csv(s, f);
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace dampcheck
