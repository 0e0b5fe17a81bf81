#pragma once

// Domain types shared by every dampcheck module: oscillator parameters,
// damping regimes, phase-space samples and trajectories.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dampcheck {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Relative band around gamma == 0 and gamma == omega0 used by classify_regime.
inline constexpr double kDefaultRegimeTol = 1e-9;

// Error hierarchy. Everything thrown by the library derives from Error so
// callers (the CLI in particular) can map failures to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// omega0 <= 0, gamma < 0, non-finite numbers, malformed grids.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operation called outside the damping regime it is valid for.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at the phase-space origin, where no angle exists.
class OriginError : public Error {
 public:
  using Error::Error;
};

/// H1 divides by gamma; gamma == 0 is a pole, not a value.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Equation-of-motion convention incompatible with the parameters.
class ConventionError : public Error {
 public:
  using Error::Error;
};

/// Consecutive samples too far apart to unwrap an angle unambiguously.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Natural frequency omega0 and damping gamma. gamma is always stored in the
/// corrected convention, x'' + 2 gamma x' + omega0^2 x = 0.
class OscillatorParams {
 public:
  OscillatorParams(double omega0, double gamma) : omega0_(omega0), gamma_(gamma) {
    if (!std::isfinite(omega0) || !(omega0 > 0.0)) {
      throw InvalidArgument("omega0 must be finite and > 0");
    }
    if (!std::isfinite(gamma) || gamma < 0.0) {
      throw InvalidArgument("gamma must be finite and >= 0");
    }
  }

  [[nodiscard]] double omega0() const noexcept { return omega0_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }

  friend bool operator==(const OscillatorParams&, const OscillatorParams&) = default;

 private:
  double omega0_;
  double gamma_;
};

enum class Regime { Undamped, Underdamped, Critical, Overdamped };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Undamped:
      return "Undamped";
    case Regime::Underdamped:
      return "Underdamped";
    case Regime::Critical:
      return "Critical";
    case Regime::Overdamped:
      return "Overdamped";
  }
  return "?";
}

inline Regime classify_regime(const OscillatorParams& params, double tol = kDefaultRegimeTol) {
  if (!(tol >= 0.0)) throw InvalidArgument("regime tolerance must be >= 0");
  const double w0 = params.omega0();
  const double g = params.gamma();
  if (g <= tol * w0) return Regime::Undamped;
  if (std::abs(g - w0) <= tol * w0) return Regime::Critical;
  return g < w0 ? Regime::Underdamped : Regime::Overdamped;
}

/// True for the regimes where the cosine solution family applies.
inline bool oscillates(Regime r) { return r == Regime::Undamped || r == Regime::Underdamped; }

/// omega = sqrt(omega0^2 - gamma^2). Factored form keeps omega^2 + gamma^2
/// within a few ulp of omega0^2 even close to critical damping.
inline double pseudo_frequency(const OscillatorParams& params) {
  const double w0 = params.omega0();
  const double g = params.gamma();
  if (!(g < w0)) {
    throw RegimeError("pseudo-frequency requires gamma < omega0 (got gamma=" + std::to_string(g) +
                      ", omega0=" + std::to_string(w0) + ")");
  }
  return std::sqrt((w0 - g) * (w0 + g));
}

/// zeta = sqrt(gamma^2 - omega0^2), the overdamped decay split.
inline double decay_split(const OscillatorParams& params) {
  const double w0 = params.omega0();
  const double g = params.gamma();
  if (!(g > w0)) {
    throw RegimeError("decay split requires gamma > omega0");
  }
  return std::sqrt((g - w0) * (g + w0));
}

struct PhaseState {
  double t = 0.0;
  double x = 0.0;
  double p = 0.0;

  [[nodiscard]] bool finite() const noexcept {
    return std::isfinite(t) && std::isfinite(x) && std::isfinite(p);
  }
  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Ordered phase-space samples. Non-empty with strictly increasing t.
class Trajectory {
 public:
  Trajectory(OscillatorParams params, std::vector<PhaseState> samples)
      : params_(params), samples_(std::move(samples)) {
    if (samples_.empty()) throw InvalidArgument("trajectory must be non-empty");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (!samples_[i].finite()) {
        throw NumericalError("trajectory sample " + std::to_string(i) + " is not finite");
      }
      if (i > 0 && !(samples_[i].t > samples_[i - 1].t)) {
        throw InvalidArgument("trajectory times must be strictly increasing");
      }
    }
  }

  [[nodiscard]] const OscillatorParams& params() const noexcept { return params_; }
  [[nodiscard]] const std::vector<PhaseState>& samples() const noexcept { return samples_; }
  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] const PhaseState& front() const { return samples_.front(); }
  [[nodiscard]] const PhaseState& back() const { return samples_.back(); }
  [[nodiscard]] auto begin() const noexcept { return samples_.begin(); }
  [[nodiscard]] auto end() const noexcept { return samples_.end(); }

 private:
  OscillatorParams params_;
  std::vector<PhaseState> samples_;
};

/// n+1 evenly spaced times t0, t0+h, ..., t1.
inline std::vector<double> uniform_times(double t0, double t1, std::size_t count) {
  if (count == 0) throw InvalidArgument("time grid needs at least one sample");
  if (count == 1) return {t0};
  if (!(t1 > t0)) throw InvalidArgument("time grid needs t1 > t0");
  std::vector<double> ts(count);
  const double h = (t1 - t0) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) ts[i] = t0 + h * static_cast<double>(i);
  ts.back() = t1;
  return ts;
}

/// t0, t0+dt, ... up to and including t_end (computed as t0 + k*dt, no drift).
inline std::vector<double> stepped_times(double t0, double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (!(t_end >= t0)) throw InvalidArgument("t_end must be >= t0");
  const auto n = static_cast<std::size_t>(std::llround((t_end - t0) / dt));
  std::vector<double> ts;
  ts.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) ts.push_back(t0 + dt * static_cast<double>(k));
  return ts;
}

}  // namespace dampcheck
