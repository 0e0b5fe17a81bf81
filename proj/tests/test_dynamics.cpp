#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dampcheck/dynamics.hpp"

using namespace dampcheck;

TEST(EomRhs, Examples) {
  const OscillatorParams params(1.0, 0.1);
  EXPECT_EQ(eom_rhs(1.0, 0.0, params, Convention::ZimmerCorrected), (Derivative{0.0, -1.0}));
  const auto d = eom_rhs(0.0, 1.0, params, Convention::ZimmerCorrected);
  EXPECT_EQ(d.dxdt, 1.0);
  EXPECT_NEAR(d.dpdt, -0.2, 1e-16);
  const auto liu = eom_rhs(0.0, 1.0, params, Convention::LiuEq1);
  EXPECT_EQ(liu.dxdt, 1.0);
  EXPECT_NEAR(liu.dpdt, -0.1, 1e-16);
  EXPECT_THROW(eom_rhs(1.0, 0.0, OscillatorParams(2.0, 0.1), Convention::LiuEq1), ConventionError);
}

TEST(EomRhs, ConventionsAgreeWithDoubledGamma) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> state(-100.0, 100.0);
  std::uniform_real_distribution<double> damp(0.0, 5.0);
  for (int k = 0; k < 5000; ++k) {
    const double g = damp(rng);
    const double x = state(rng);
    const double p = state(rng);
    EXPECT_EQ(eom_rhs(x, p, OscillatorParams(1.0, 2.0 * g), Convention::LiuEq1),
              eom_rhs(x, p, OscillatorParams(1.0, g), Convention::ZimmerCorrected));
  }
  EXPECT_EQ(from_liu_gamma(0.2), OscillatorParams(1.0, 0.1));
}

TEST(IntegrateRk4, UndampedPeriodReturnsToStart) {
  const OscillatorParams params(1.0, 0.0);
  const auto traj = integrate_rk4(params, Convention::ZimmerCorrected, {0.0, 0.0, 1.0}, kTwoPi, 1e-3);
  const auto exact = solve_underdamped(params, 0.0, 1.0);
  EXPECT_NEAR(traj.back().t, kTwoPi, 0.0);
  EXPECT_NEAR(traj.back().x, exact.x(kTwoPi), 1e-6);
  EXPECT_NEAR(traj.back().x, 0.0, 1e-6);
  EXPECT_NEAR(traj.back().p, 1.0, 1e-6);
}

TEST(IntegrateRk4, SingleStepContract) {
  const OscillatorParams params(1.0, 0.1);
  const auto traj = integrate_rk4(params, Convention::ZimmerCorrected, {0.5, 1.0, 0.0}, 0.5 + 0.01, 0.01);
  ASSERT_EQ(traj.size(), 2u);
  EXPECT_EQ(traj.back().t, 0.51);
}

TEST(IntegrateRk4, ShortFinalStepLandsOnEnd) {
  const OscillatorParams params(1.0, 0.1);
  const auto traj = integrate_rk4(params, Convention::ZimmerCorrected, {0.0, 1.0, 0.0}, 1.05, 0.1);
  ASSERT_EQ(traj.size(), 12u);
  EXPECT_EQ(traj.back().t, 1.05);
  EXPECT_NEAR(traj.samples()[10].t, 1.0, 1e-15);
}

TEST(IntegrateRk4, CriticalMatchesClosedForm) {
  const OscillatorParams params(1.0, 1.0);
  const auto traj = integrate_rk4(params, Convention::ZimmerCorrected, {0.0, 1.0, -1.0}, 1.0, 1e-3);
  const auto exact = solve_critical(params, 1.0, -1.0);
  EXPECT_NEAR(traj.back().x, std::exp(-1.0), 1e-8);
  EXPECT_NEAR(traj.back().x, exact.x(1.0), 1e-8);
  EXPECT_NEAR(traj.back().p, exact.p(1.0), 1e-8);
}

TEST(IntegrateRk4, FourthOrderConvergence) {
  const OscillatorParams params(1.0, 0.1);
  const auto exact = solve_underdamped(params, 1.0, 0.0);
  const auto endpoint_error = [&](double dt) {
    const auto traj = integrate_rk4(params, Convention::ZimmerCorrected, {0.0, 1.0, 0.0}, 10.0, dt);
    return std::hypot(traj.back().x - exact.x(10.0), traj.back().p - exact.p(10.0));
  };
  for (double dt : {0.2, 0.1, 0.05}) {
    const double ratio = endpoint_error(dt) / endpoint_error(dt / 2);
    EXPECT_GE(ratio, 14.0) << "dt=" << dt;
    EXPECT_LE(ratio, 18.0) << "dt=" << dt;
  }
}

TEST(IntegrateRk4, Errors) {
  const OscillatorParams params(1.0, 0.1);
  EXPECT_THROW(integrate_rk4(params, Convention::ZimmerCorrected, {0.0, 1.0, 0.0}, 1.0, 0.0), InvalidArgument);
  EXPECT_THROW(integrate_rk4(params, Convention::ZimmerCorrected, {1.0, 1.0, 0.0}, 1.0, 0.1), InvalidArgument);
  EXPECT_THROW(integrate_rk4(params, Convention::ZimmerCorrected, {0.0, 1e308, 1e308}, 10.0, 1.0),
               NumericalError);
}

TEST(ResidualCheck, ClaimedCurveAtTimeZero) {
  const auto c = liu_claimed_solution(0.1, 0.0);
  const auto rep = residual_check(c, Convention::LiuEq1, {0.0});
  // d/dt [e^{-gt} cos t] at 0 is -g; claimed p(0) = 0.
  EXPECT_NEAR(rep.residual_x[0], -0.1, 1e-15);
  // d/dt [e^{-gt} sin t] at 0 is 1; rhs is -x - g p = -1.
  EXPECT_NEAR(rep.residual_p[0], 2.0, 1e-15);
  EXPECT_EQ(rep.verdict, Verdict::Violates);
  EXPECT_EQ(rep.argmax_t, 0.0);
}

TEST(ResidualCheck, FiniteDifferenceModeAgreesWithAnalytic) {
  const auto c = liu_claimed_solution(0.1, 0.0);
  const auto ts = uniform_times(0.0, 5.0, 51);
  const auto a = residual_check(c, Convention::LiuEq1, ts);
  const auto f = residual_check(c, Convention::LiuEq1, ts, kDefaultResidualThreshold,
                                DerivativeMode::CentralDifference);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_NEAR(a.residual_x[i], f.residual_x[i], 1e-8);
    EXPECT_NEAR(a.residual_p[i], f.residual_p[i], 1e-8);
  }
}

TEST(ResidualCheck, CorrectedSolutionsCertified) {
  const auto ts = uniform_times(0.0, 20.0, 1000);
  const auto under = solve_underdamped(OscillatorParams(1.0, 0.1), 1.0, -0.1);
  EXPECT_EQ(residual_check(under, Convention::ZimmerCorrected, ts, 1e-10).verdict, Verdict::Satisfies);
  for (double g : {0.1, 1.0, 1.25, 3.0, 100.0}) {
    for (double w0 : {0.5, 1.0, 2.0}) {
      if (g == 1.0 && w0 != 1.0) continue;
      const auto c = solve(OscillatorParams(w0, g), 1.0, 0.3);
      const auto rep = residual_check(c, Convention::ZimmerCorrected, ts, 1e-10);
      EXPECT_EQ(rep.verdict, Verdict::Satisfies) << "g=" << g << " w0=" << w0 << " max=" << rep.max_abs_residual();
    }
  }
}

TEST(ResidualCheck, ClaimedCurveFalsifiedUnderBothConventions) {
  const auto ts = uniform_times(0.0, 1.0, 101);
  for (double g : {0.01, 0.1, 0.5}) {
    const auto c = liu_claimed_solution(g, 0.0);
    const auto liu = residual_check(c, Convention::LiuEq1, ts, 1e-6);
    const auto zim = residual_check(c, Convention::ZimmerCorrected, ts, 1e-6);
    EXPECT_EQ(liu.verdict, Verdict::Violates);
    EXPECT_EQ(zim.verdict, Verdict::Violates);
    EXPECT_GE(liu.max_abs_residual_x, g / 2);
  }
}

// x = cos t, p = sin t runs the wrong way round the circle: dx/dt = -p and
// dp/dt = x, so even the undamped claimed solution violates p' = -x.
TEST(ResidualCheck, ClaimedCurveViolatesEvenWhenUndamped) {
  const auto c = liu_claimed_solution(0.0, 0.0);
  const auto ts = uniform_times(0.0, kTwoPi, 200);
  const auto rep = residual_check(c, Convention::LiuEq1, ts, 1e-6);
  EXPECT_EQ(rep.verdict, Verdict::Violates);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_NEAR(rep.residual_x[i], -2.0 * std::sin(ts[i]), 1e-14);
    EXPECT_NEAR(rep.residual_p[i], 2.0 * std::cos(ts[i]), 1e-14);
  }
}

TEST(ResidualCheck, ReportInvariants) {
  const auto c = solve_underdamped(OscillatorParams(1.0, 0.2), 1.0, 0.0);
  const auto ts = uniform_times(0.0, 3.0, 10);
  EXPECT_THROW(residual_check(c, Convention::ZimmerCorrected, {}), InvalidArgument);
  const auto strict = residual_check(c, Convention::LiuEq1, ts, 0.0);
  EXPECT_GE(strict.max_abs_residual_x, 0.0);
  EXPECT_EQ(strict.verdict, Verdict::Violates);
  const auto other = solve_underdamped(OscillatorParams(2.0, 0.2), 1.0, 0.0);
  EXPECT_THROW(residual_check(other, Convention::LiuEq1, ts), ConventionError);
}

TEST(TrajectoryCsv, HeaderAndPrecision) {
  const Trajectory traj(OscillatorParams(1.0, 0.1), {{0.0, 0.1, 1.0 / 3.0}, {0.5, -2.0, 0.0}});
  std::ostringstream os;
  write_trajectory_csv(traj, os);
  EXPECT_EQ(os.str(), "t,x,p\n0,0.10000000000000001,0.33333333333333331\n0.5,-2,0\n");
  EXPECT_THROW(write_trajectory_csv(traj, std::string("/nonexistent-dir/x.csv")), IoError);
}
