#pragma once

// Command dispatch for the dampcheck tool. Kept separate from main() so the
// tests can drive it in-process.
//
// Exit codes: 0 check passed / files written, 1 a violation was detected,
// 2 invalid input.

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>

#include "dampcheck/dampcheck.hpp"

namespace dampcheck::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInvalid = 2;

struct RunConfig {
  double omega0 = 1.0;
  double gamma = 0.1;
  double phi = 0.0;
  double tol = kDefaultRegimeTol;
  std::string convention = "zimmer";

  // residual
  std::string curve = "corrected";
  double x0 = 1.0;
  double p0 = 0.0;
  double t_end = 20.0;
  std::size_t samples = 1000;
  double threshold = kDefaultResidualThreshold;
  std::string derivative = "analytic";

  // conserve
  std::string invariant = "r";
  std::string trajectory = "rk4";
  double dt = 1e-3;
  double conserve_tol = 1e-6;
  std::string csv_out;

  // field
  std::string field_invariant = "h1";
  GridSpec grid;
  std::string svg_out;

  bool json = false;
};

inline Convention parse_convention(const std::string& s) {
  return s == "liu" ? Convention::LiuEq1 : Convention::ZimmerCorrected;
}

inline int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const OscillatorParams params(cfg.omega0, cfg.gamma);
  const Regime r = classify_regime(params, cfg.tol);
  out << std::setprecision(16) << to_string(r);
  if (oscillates(r)) {
    out << ", omega=" << pseudo_frequency(params);
  } else if (r == Regime::Overdamped) {
    out << ", zeta=" << decay_split(params);
  }
  out << '\n';
  return kExitOk;
}

inline int cmd_residual(const RunConfig& cfg, std::ostream& out) {
  const Convention conv = parse_convention(cfg.convention);
  const auto c = cfg.curve == "liu-claimed"
                     ? liu_claimed_solution(cfg.gamma, cfg.phi)
                     : solve(OscillatorParams(cfg.omega0, cfg.gamma), cfg.x0, cfg.p0);
  const auto mode = cfg.derivative == "fd" ? DerivativeMode::CentralDifference : DerivativeMode::Analytic;
  const auto rep = residual_check(c, conv, uniform_times(0.0, cfg.t_end, cfg.samples), cfg.threshold, mode);
  out << std::setprecision(17) << "curve: " << cfg.curve << "\nconvention: " << to_string(conv)
      << "\nmax |dx/dt - p|: " << rep.max_abs_residual_x
      << "\nmax |dp/dt - rhs|: " << rep.max_abs_residual_p << "\nworst t: " << rep.argmax_t
      << "\nthreshold: " << rep.threshold << "\nverdict: " << to_string(rep.verdict) << '\n';
  return rep.verdict == Verdict::Satisfies ? kExitOk : kExitViolation;
}

inline int cmd_conserve(const RunConfig& cfg, std::ostream& out) {
  std::optional<Trajectory> traj;
  if (cfg.trajectory == "liu-claimed") {
    traj = sample(liu_claimed_solution(cfg.gamma, cfg.phi), stepped_times(0.0, cfg.t_end, cfg.dt));
  } else {
    const OscillatorParams params(cfg.omega0, cfg.gamma);
    traj = integrate_rk4(params, parse_convention(cfg.convention), {0.0, cfg.x0, cfg.p0}, cfg.t_end, cfg.dt);
  }

  InvariantSeries series;
  if (cfg.invariant == "r") {
    series = r_zimmer_series(*traj);
  } else if (cfg.invariant == "h1-naive") {
    series = h1_naive_series(*traj, cfg.gamma);
  } else if (cfg.invariant == "h1-unwrapped") {
    series = h1_unwrapped(*traj, cfg.gamma);
  } else if (cfg.invariant == "gamma-h1") {
    for (const auto& s : *traj) {
      series.t.push_back(s.t);
      series.values.push_back(gamma_h1(s.x, s.p, cfg.gamma));
    }
  } else {
    for (const auto& s : *traj) {
      series.t.push_back(s.t);
      series.values.push_back(energy_undamped(s.x, s.p, traj->params().omega0()));
    }
  }

  if (!cfg.csv_out.empty()) write_series_csv(series, cfg.csv_out);
  const double dev = series.max_deviation_from_initial();
  out << std::setprecision(17) << "invariant: " << cfg.invariant << "\ntrajectory: " << cfg.trajectory
      << "\nsamples: " << series.size() << "\ninitial value: " << series.values.front()
      << "\nmax deviation from initial: " << dev << "\ntolerance: " << cfg.conserve_tol
      << "\nconserved: " << (dev <= cfg.conserve_tol ? "yes" : "no") << '\n';
  return dev <= cfg.conserve_tol ? kExitOk : kExitViolation;
}

inline FieldInvariant parse_field_invariant(const std::string& s) {
  if (s == "cos-h1") return FieldInvariant::CosH1;
  if (s == "gamma-h1") return FieldInvariant::GammaH1;
  if (s == "r") return FieldInvariant::RPoint;
  return FieldInvariant::H1Naive;
}

inline int cmd_field(const RunConfig& cfg, std::ostream& out) {
  const auto grid = evaluate_field(parse_field_invariant(cfg.field_invariant),
                                   OscillatorParams(cfg.omega0, cfg.gamma), cfg.grid);
  if (!cfg.csv_out.empty()) {
    export_grid(grid, "csv", cfg.csv_out);
    out << "wrote " << cfg.csv_out << '\n';
  }
  if (!cfg.svg_out.empty()) {
    export_grid(grid, "svg", cfg.svg_out);
    out << "wrote " << cfg.svg_out << '\n';
  }
  out << "valid cells: " << grid.valid_count() << " of " << grid.nx() * grid.ny() << '\n';
  try {
    const auto jump = detect_branch_jump(grid);
    out << std::setprecision(12) << "branch jump across negative x-axis: " << jump.jump_estimate
        << " (" << jump.locus.size() << " of " << jump.columns.size() << " columns flagged)\n";
  } catch (const InvalidArgument& e) {
    out << "branch jump: not measured (" << e.what() << ")\n";
  }
  return kExitOk;
}

inline nlohmann::json to_json(const ErrorReport& rep) {
  nlohmann::json j;
  j["schema"] = 1;
  j["gamma"] = rep.gamma;
  j["phi"] = rep.phi;
  j["all_passed"] = rep.all_passed();
  j["errors"] = nlohmann::json::array();
  for (const auto& s : rep.sections) {
    nlohmann::json e;
    e["number"] = s.number;
    e["title"] = s.title;
    e["passed"] = s.passed;
    e["evidence"] = nlohmann::json::object();
    for (const auto& [k, v] : s.evidence) e["evidence"][k] = v;
    e["notes"] = s.notes;
    j["errors"].push_back(e);
  }
  return j;
}

inline int cmd_demo_errors(const RunConfig& cfg, std::ostream& out) {
  const ErrorReport rep = run_error_demo(cfg.gamma, cfg.phi);
  if (cfg.json) {
    out << to_json(rep).dump(2) << '\n';
  } else {
    out << std::setprecision(10) << "Reproducing the seven errors at gamma=" << rep.gamma
        << ", phi=" << rep.phi << "\n\n";
    for (const auto& s : rep.sections) {
      out << "Error #" << s.number << ": " << s.title << "\n  " << (s.passed ? "PASS" : "FAIL")
          << " (claim " << (s.passed ? "reproduced" : "NOT reproduced") << ")\n";
      for (const auto& [k, v] : s.evidence) out << "    " << k << " = " << v << '\n';
      for (const auto& n : s.notes) out << "    note: " << n << '\n';
    }
    out << '\n' << (rep.all_passed() ? "all seven errors reproduced" : "some checks failed") << '\n';
  }
  return rep.all_passed() ? kExitOk : kExitViolation;
}

/// Parses argv and runs exactly one subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification checks for the damped harmonic oscillator", "dampcheck"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_params = [&](CLI::App* sub) {
    sub->add_option("--omega0", cfg.omega0, "natural frequency (> 0)")->capture_default_str();
    sub->add_option("--gamma", cfg.gamma, "damping, corrected convention (>= 0)")->capture_default_str();
  };

  auto* classify = app.add_subcommand("classify", "damping regime with omega or zeta");
  add_params(classify);
  classify->add_option("--tol", cfg.tol, "relative classification band")->check(CLI::NonNegativeNumber);

  auto* residual = app.add_subcommand("residual", "substitute a closed-form curve into the equation of motion");
  add_params(residual);
  residual->add_option("--curve", cfg.curve)->check(CLI::IsMember({"liu-claimed", "corrected"}))->capture_default_str();
  residual->add_option("--convention", cfg.convention)->check(CLI::IsMember({"liu", "zimmer"}))->capture_default_str();
  residual->add_option("--phi", cfg.phi, "phase of the claimed solution");
  residual->add_option("--x0", cfg.x0)->capture_default_str();
  residual->add_option("--p0", cfg.p0)->capture_default_str();
  residual->add_option("--t-end", cfg.t_end)->check(CLI::PositiveNumber)->capture_default_str();
  residual->add_option("--samples", cfg.samples)->check(CLI::Range(std::size_t{1}, std::size_t{100000000}))->capture_default_str();
  residual->add_option("--threshold", cfg.threshold)->check(CLI::NonNegativeNumber)->capture_default_str();
  residual->add_option("--derivative", cfg.derivative)->check(CLI::IsMember({"analytic", "fd"}))->capture_default_str();

  auto* conserve = app.add_subcommand("conserve", "measure drift of an invariant along a trajectory");
  add_params(conserve);
  conserve->add_option("--invariant", cfg.invariant)
      ->check(CLI::IsMember({"r", "h1-naive", "h1-unwrapped", "gamma-h1", "energy"}))
      ->capture_default_str();
  conserve->add_option("--trajectory", cfg.trajectory, "rk4 integration or the claimed closed form")
      ->check(CLI::IsMember({"rk4", "liu-claimed"}))
      ->capture_default_str();
  conserve->add_option("--convention", cfg.convention)->check(CLI::IsMember({"liu", "zimmer"}))->capture_default_str();
  conserve->add_option("--phi", cfg.phi);
  conserve->add_option("--x0", cfg.x0)->capture_default_str();
  conserve->add_option("--p0", cfg.p0)->capture_default_str();
  conserve->add_option("--t-end", cfg.t_end)->check(CLI::PositiveNumber)->capture_default_str();
  conserve->add_option("--dt", cfg.dt)->check(CLI::PositiveNumber)->capture_default_str();
  conserve->add_option("--tol", cfg.conserve_tol, "allowed max deviation")->check(CLI::NonNegativeNumber)->capture_default_str();
  conserve->add_option("-o,--output", cfg.csv_out, "CSV of t,value");

  auto* field = app.add_subcommand("field", "evaluate an invariant over the phase plane");
  add_params(field);
  field->add_option("--invariant", cfg.field_invariant)
      ->check(CLI::IsMember({"h1", "cos-h1", "gamma-h1", "r"}))
      ->capture_default_str();
  field->add_option("--x-min", cfg.grid.x_min)->capture_default_str();
  field->add_option("--x-max", cfg.grid.x_max)->capture_default_str();
  field->add_option("--p-min", cfg.grid.p_min)->capture_default_str();
  field->add_option("--p-max", cfg.grid.p_max)->capture_default_str();
  field->add_option("--nx", cfg.grid.nx)->check(CLI::Range(std::size_t{2}, std::size_t{100000}))->capture_default_str();
  field->add_option("--ny", cfg.grid.ny)->check(CLI::Range(std::size_t{2}, std::size_t{100000}))->capture_default_str();
  field->add_option("-o,--output", cfg.csv_out, "CSV of x,p,value,valid");
  field->add_option("--svg", cfg.svg_out, "SVG heatmap");

  auto* demo = app.add_subcommand("demo-errors", "reproduce all seven errors as a pass/fail report");
  demo->add_option("--gamma", cfg.gamma, "damping, 0 < gamma < 1")->capture_default_str();
  demo->add_option("--phi", cfg.phi)->capture_default_str();
  demo->add_flag("--json", cfg.json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (classify->parsed()) return cmd_classify(cfg, out);
    if (residual->parsed()) return cmd_residual(cfg, out);
    if (conserve->parsed()) return cmd_conserve(cfg, out);
    if (field->parsed()) return cmd_field(cfg, out);
    return cmd_demo_errors(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace dampcheck::cli
