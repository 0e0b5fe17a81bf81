#include <gtest/gtest.h>

#include "dampcheck/error_demo.hpp"

using namespace dampcheck;

class ErrorDemoAtGamma : public ::testing::TestWithParam<double> {};

TEST_P(ErrorDemoAtGamma, EverySectionReproduces) {
  const auto rep = run_error_demo(GetParam());
  ASSERT_EQ(rep.sections.size(), 7u);
  for (std::size_t k = 0; k < rep.sections.size(); ++k) {
    const auto& s = rep.sections[k];
    EXPECT_EQ(s.number, static_cast<int>(k) + 1);
    EXPECT_TRUE(s.passed) << "error #" << s.number << ": " << s.title;
    EXPECT_FALSE(s.evidence.empty());
  }
  EXPECT_TRUE(rep.all_passed());
}

INSTANTIATE_TEST_SUITE_P(UnderdampedGammas, ErrorDemoAtGamma, ::testing::Values(0.01, 0.1, 0.25, 0.6, 0.9));

TEST(ErrorDemo, NonZeroPhase) {
  EXPECT_TRUE(run_error_demo(0.1, 1.0).all_passed());
  EXPECT_TRUE(run_error_demo(0.1, -2.5).all_passed());
}

TEST(ErrorDemo, RejectsNonUnderdampedGamma) {
  EXPECT_THROW(run_error_demo(0.0), InvalidArgument);
  EXPECT_THROW(run_error_demo(1.0), InvalidArgument);
  EXPECT_THROW(run_error_demo(0.1, 4.0), InvalidArgument);
}
