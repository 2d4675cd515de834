#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "en/classify.hpp"
#include "en/errors.hpp"
#include "en/kernel2d.hpp"
#include "oracles.hpp"

using namespace en;

namespace {

TEST(Classify, AlgebraicVerdict) {
  EXPECT_EQ(classify_diag(DiagParams(1.0, 1.0, 0.5)).verdict, Verdict::positive);
  EXPECT_EQ(classify_diag(DiagParams(2.0, 3.0, 6.0)).verdict, Verdict::positive);
  const SignClassification s = classify_diag(DiagParams(1.0, 1.0, 5.0), {}, false);
  EXPECT_EQ(s.verdict, Verdict::sign_changing);
  EXPECT_DOUBLE_EQ(s.threshold_margin, -4.0);
  EXPECT_FALSE(s.witness.has_value());
  EXPECT_STREQ(to_string(Verdict::positive), "Positive");
  EXPECT_STREQ(to_string(Verdict::sign_changing), "SignChanging");
}

TEST(Classify, WitnessForMFive) {
  const Witness w = negative_witness(DiagParams(1.0, 1.0, 5.0));
  EXPECT_TRUE(w.certified());
  EXPECT_DOUBLE_EQ(w.x, 10.0);
  EXPECT_NEAR(w.y, std::numbers::pi / std::sqrt(2.0) / std::sqrt(10.0), 1e-12);
  EXPECT_NEAR(w.y, 0.702481, 1e-6);
  EXPECT_NEAR(w.scaled_value, -0.0172, 5e-4);
  EXPECT_NEAR(w.value, w.scaled_value * std::exp(-w.log_scale), 1e-18);
}

TEST(Classify, WitnessAgreesWithDirectOracle) {
  const Witness w = negative_witness(DiagParams(1.0, 1.0, 5.0));
  const double ref = oracle::kernel(1.0, 1.0, 5.0, w.x, w.y);
  EXPECT_LT(ref, 0.0);
  EXPECT_NEAR(w.value, ref, 1e-8);
}

TEST(Classify, WitnessNearThreshold) {
  const Witness w = negative_witness(DiagParams(1.0, 1.0, 1.21));
  EXPECT_TRUE(w.certified());
  EXPECT_DOUBLE_EQ(w.x, 10.0);
  EXPECT_NEAR(w.scaled_value, -0.00458, 2e-4);
}

TEST(Classify, WitnessMapsBackThroughScaling) {
  const DiagParams p(2.0, 0.5, 4.0);  // m = 4
  const Witness w = negative_witness(p);
  EXPECT_TRUE(w.certified());
  EXPECT_LT(eval(p, w.x, w.y).value, 0.0);
}

TEST(Classify, PositiveCaseHasNoWitness) {
  EXPECT_THROW(negative_witness(DiagParams(1.0, 1.0, 0.9)), DomainError);
}

TEST(SignMap, LatticeIncludesEnds) {
  const SignMap map = sign_map(5.0, {10.0, 20.0, 0.0, 1.0}, 3, 2);
  ASSERT_EQ(map.xs.size(), 3);
  EXPECT_DOUBLE_EQ(map.xs[0], 10.0);
  EXPECT_DOUBLE_EQ(map.xs[2], 20.0);
  EXPECT_DOUBLE_EQ(map.ys[1], 1.0);
  EXPECT_EQ(map.values.rows(), 2);
  EXPECT_EQ(map.values.cols(), 3);
}

TEST(SignMap, FindsNegativeRegionAndIsThreadIndependent) {
  const Window w{10.0, 30.0, 0.0, 1.2};
  const SignMap one = sign_map(5.0, w, 9, 7, {}, 1);
  const SignMap four = sign_map(5.0, w, 9, 7, {}, 4);
  EXPECT_EQ(one.signs, four.signs);
  EXPECT_EQ(one.values, four.values);
  EXPECT_GT((one.signs.array() < 0).count(), 0);
  EXPECT_GT((one.signs.array() > 0).count(), 0);
}

TEST(SignMap, RejectsBadInput) {
  EXPECT_THROW(sign_map(0.8, {0.0, 5.0, 0.0, 2.0}, 6, 5), DomainError);
  EXPECT_THROW(sign_map(5.0, {-1.0, 5.0, 0.0, 2.0}, 6, 5), DomainError);
  EXPECT_THROW(sign_map(5.0, {0.0, 5.0, 0.0, 2.0}, 0, 5), DomainError);
}

TEST(NonDiagonal, CriticalValues) {
  const NonDiagCritical k = nondiag_critical(1.0, 0.2, 4.0);
  EXPECT_NEAR(k.d_c, std::pow(2.0 + 0.2, 2), 1e-14);
  EXPECT_NEAR(k.r, std::sqrt(1.1), 1e-14);
  EXPECT_THROW(nondiag_critical(1.0, 1.5, 1.0), DomainError);
}

TEST(NonDiagonal, ResidualVanishesOnlyAtCritical) {
  const double a = 1.0, b = 0.2, c = 4.0;
  const double dc = nondiag_critical(a, b, c).d_c;
  EXPECT_NEAR(nondiag_residual(a, b, c, dc, 0.3, 0.7), 0.0, 1e-13);
  EXPECT_GT(std::abs(nondiag_residual(a, b, c, dc + 0.5, 0.3, 0.7)), 1e-3);
}

TEST(NonDiagonal, ResidualByFiniteDifferences) {
  const double a = 1.5, b = -0.3, c = 0.8, d = 2.0;
  const double r = std::sqrt(1.0 + b / std::sqrt(a * c));
  const auto u = [&](double x, double y) {
    return std::exp(-r * (std::sqrt(c) * x + std::sqrt(a) * y));
  };
  const double x = 0.4, y = 0.2, h = 5e-3;
  const double uxx = (u(x + h, y) - 2 * u(x, y) + u(x - h, y)) / (h * h);
  const double uyy = (u(x, y + h) - 2 * u(x, y) + u(x, y - h)) / (h * h);
  const double uxy =
      (u(x + h, y + h) - u(x + h, y - h) - u(x - h, y + h) + u(x - h, y - h)) / (4 * h * h);
  const auto dyy = [&](double xx) {
    return (u(xx, y + h) - 2 * u(xx, y) + u(xx, y - h)) / (h * h);
  };
  const double uxxyy = (dyy(x + h) - 2 * dyy(x) + dyy(x - h)) / (h * h);
  const double fd = uxxyy - a * uxx - 2 * b * uxy - c * uyy + d * u(x, y);
  EXPECT_NEAR(nondiag_residual(a, b, c, d, x, y), fd, 1e-3);
}

}  // namespace
