#pragma once

// Closed-form curves for the damped oscillator: the corrected solution in each
// damping regime, plus the incorrect published solution kept as a first-class
// object so it can be falsified by the residual checker.

#include <cmath>
#include <complex>
#include <variant>

#include "dampcheck/core.hpp"

namespace dampcheck {

/// Maps an angle in [-pi, pi] onto (-pi, pi].
inline double to_principal_range(double angle) { return angle == -kPi ? kPi : angle; }

namespace curve {

/// x = A e^{-gt} cos(t + phi), p = A e^{-gt} sin(t + phi) with omega0 = 1.
/// p is not dx/dt; the derivatives below are the true ones.
struct LiuClaimed {
  double phi = 0.0;
  double amplitude = 1.0;
};

/// x = A e^{-gt} cos(wt + phi), p = dx/dt.
struct Underdamped {
  double amplitude = 1.0;
  double phi = 0.0;
};

/// x = (c1 + c2 t) e^{-gt}.
struct Critical {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// x = c1 e^{(-g+zeta)t} + c2 e^{(-g-zeta)t}.
struct Overdamped {
  double c1 = 0.0;
  double c2 = 0.0;
};

using Kind = std::variant<LiuClaimed, Underdamped, Critical, Overdamped>;

}  // namespace curve

/// An evaluable (x(t), p(t)) pair carrying hand-coded analytic derivatives.
class ClosedFormCurve {
 public:
  struct Point {
    double x;
    double p;
    double dxdt;
    double dpdt;
  };

  ClosedFormCurve(OscillatorParams params, curve::Kind kind) : params_(params), kind_(kind) {
    if (const auto* u = std::get_if<curve::Underdamped>(&kind_)) {
      if (!(u->amplitude > 0.0)) throw InvalidArgument("underdamped amplitude must be > 0");
      if (!(u->phi > -kPi && u->phi <= kPi)) throw InvalidArgument("phase must lie in (-pi, pi]");
      omega_ = pseudo_frequency(params_);
    } else if (std::holds_alternative<curve::LiuClaimed>(kind_)) {
      if (params_.omega0() != 1.0) throw InvalidArgument("the claimed solution fixes omega0 = 1");
    } else if (std::holds_alternative<curve::Overdamped>(kind_)) {
      zeta_ = decay_split(params_);
    }
  }

  [[nodiscard]] const OscillatorParams& params() const noexcept { return params_; }
  [[nodiscard]] const curve::Kind& kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_claimed() const noexcept {
    return std::holds_alternative<curve::LiuClaimed>(kind_);
  }

  [[nodiscard]] Point at(double t) const {
    const double g = params_.gamma();
    return std::visit(
        [&](const auto& k) -> Point {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, curve::LiuClaimed>) {
            const double env = k.amplitude * std::exp(-g * t);
            const double x = env * std::cos(t + k.phi);
            const double p = env * std::sin(t + k.phi);
            return {x, p, -g * x - p, -g * p + x};
          } else if constexpr (std::is_same_v<K, curve::Underdamped>) {
            const double w = omega_;
            const double env = k.amplitude * std::exp(-g * t);
            const double c = std::cos(w * t + k.phi);
            const double s = std::sin(w * t + k.phi);
            const double x = env * c;
            const double v = -env * (g * c + w * s);
            return {x, v, v, env * ((g * g - w * w) * c + 2.0 * g * w * s)};
          } else if constexpr (std::is_same_v<K, curve::Critical>) {
            const double e = std::exp(-g * t);
            const double lin = k.c1 + k.c2 * t;
            const double v = (k.c2 - g * lin) * e;
            return {lin * e, v, v, (g * g * lin - 2.0 * g * k.c2) * e};
          } else {
            const auto [slow, fast] = overdamped_rates();
            const double es = k.c1 * std::exp(slow * t);
            const double ef = k.c2 * std::exp(fast * t);
            const double v = slow * es + fast * ef;
            return {es + ef, v, v, slow * slow * es + fast * fast * ef};
          }
        },
        kind_);
  }

  [[nodiscard]] double x(double t) const { return at(t).x; }
  [[nodiscard]] double p(double t) const { return at(t).p; }
  [[nodiscard]] double dxdt(double t) const { return at(t).dxdt; }
  [[nodiscard]] double dpdt(double t) const { return at(t).dpdt; }

  [[nodiscard]] PhaseState state(double t) const {
    const Point pt = at(t);
    return {t, pt.x, pt.p};
  }

  /// Exponents (-g + zeta, -g - zeta); the slow one avoids cancellation.
  [[nodiscard]] std::pair<double, double> overdamped_rates() const {
    const double g = params_.gamma();
    const double w0 = params_.omega0();
    return {-(w0 * w0) / (g + zeta_), -g - zeta_};
  }

 private:
  OscillatorParams params_;
  curve::Kind kind_;
  double omega_ = 0.0;
  double zeta_ = 0.0;
};

inline ClosedFormCurve liu_claimed_solution(double gamma, double phi, double amplitude = 1.0) {
  return ClosedFormCurve(OscillatorParams(1.0, gamma), curve::LiuClaimed{phi, amplitude});
}

/// Fits A > 0, phi in (-pi, pi] to x(0) = x0, dx/dt(0) = p0.
inline ClosedFormCurve solve_underdamped(const OscillatorParams& params, double x0, double p0) {
  if (!oscillates(classify_regime(params))) {
    throw RegimeError("underdamped solution requested for a " +
                      std::string(to_string(classify_regime(params))) + " oscillator");
  }
  if (x0 == 0.0 && p0 == 0.0) throw OriginError("initial state at the origin has no amplitude");
  const double w = pseudo_frequency(params);
  // A cos(phi) = x0, A sin(phi) = -(p0 + g x0) / w
  const double sine_part = -(p0 + params.gamma() * x0) / w;
  const double amplitude = std::hypot(x0, sine_part);
  const double phi = to_principal_range(std::atan2(sine_part, x0));
  return ClosedFormCurve(params, curve::Underdamped{amplitude, phi});
}

inline ClosedFormCurve solve_critical(const OscillatorParams& params, double x0, double p0) {
  if (classify_regime(params) != Regime::Critical) {
    throw RegimeError("critical solution requested for a " +
                      std::string(to_string(classify_regime(params))) + " oscillator");
  }
  return ClosedFormCurve(params, curve::Critical{x0, p0 + params.gamma() * x0});
}

inline ClosedFormCurve solve_overdamped(const OscillatorParams& params, double x0, double p0) {
  if (classify_regime(params) != Regime::Overdamped) {
    throw RegimeError("overdamped solution requested for a " +
                      std::string(to_string(classify_regime(params))) + " oscillator");
  }
  const double zeta = decay_split(params);
  const double slow = -(params.omega0() * params.omega0()) / (params.gamma() + zeta);
  const double fast = -params.gamma() - zeta;
  // c1 + c2 = x0, slow c1 + fast c2 = p0
  const double c1 = (p0 - fast * x0) / (2.0 * zeta);
  const double c2 = (slow * x0 - p0) / (2.0 * zeta);
  return ClosedFormCurve(params, curve::Overdamped{c1, c2});
}

/// Dispatches on the regime of params.
inline ClosedFormCurve solve(const OscillatorParams& params, double x0, double p0) {
  switch (classify_regime(params)) {
    case Regime::Undamped:
    case Regime::Underdamped:
      return solve_underdamped(params, x0, p0);
    case Regime::Critical:
      return solve_critical(params, x0, p0);
    case Regime::Overdamped:
      break;
  }
  return solve_overdamped(params, x0, p0);
}

/// Samples a curve at the given times (p from the curve, not from dx/dt).
inline Trajectory sample(const ClosedFormCurve& c, const std::vector<double>& times) {
  std::vector<PhaseState> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(c.state(t));
  return Trajectory(c.params(), std::move(out));
}

struct ZFormCheck {
  std::complex<double> z;               // x + ip from the corrected curve
  std::complex<double> corrected_form;  // A e^{-gt} [cos(wt+phi) - i sin(wt+phi+beta)]
  std::complex<double> simple_form;     // A e^{-gt - i(wt+phi)}
  double beta = 0.0;
  bool matches_corrected_form = false;
  bool differs_from_simple_exponential = false;

  [[nodiscard]] double distance_to_simple() const { return std::abs(z - simple_form); }
};

inline constexpr double kZFormTol = 1e-12;

/// z = x + ip for the corrected curve with omega0 = 1, compared against the
/// phase-shifted form (sin beta = gamma, cos beta = omega) and against the
/// simple exponential.
inline ZFormCheck verify_z_form(double amplitude, double phi, double gamma, double t) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw RegimeError("z-form check needs 0 <= gamma < 1");
  if (!(amplitude > 0.0)) throw InvalidArgument("amplitude must be > 0");
  const OscillatorParams params(1.0, gamma);
  const double w = pseudo_frequency(params);
  const ClosedFormCurve c(params, curve::Underdamped{amplitude, to_principal_range(phi)});
  const PhaseState s = c.state(t);

  ZFormCheck out;
  out.z = {s.x, s.p};
  out.beta = std::atan2(gamma, w);
  const double env = amplitude * std::exp(-gamma * t);
  const double psi = w * t + phi;
  out.corrected_form = {env * std::cos(psi), -env * std::sin(psi + out.beta)};
  out.simple_form = env * std::exp(std::complex<double>(0.0, -psi));
  out.matches_corrected_form = std::abs(out.z - out.corrected_form) <= kZFormTol;
  out.differs_from_simple_exponential = std::abs(out.z - out.simple_form) > kZFormTol;
  return out;
}

}  // namespace dampcheck
