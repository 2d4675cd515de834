#include <gtest/gtest.h>

#include <cmath>

#include "en/errors.hpp"
#include "en/kernel2d.hpp"
#include "oracles.hpp"

using namespace en;

namespace {

struct Point {
  double x, y;
};

TEST(Representation, NamesRoundTrip) {
  for (Representation r : {Representation::double_integral, Representation::onedim,
                           Representation::branchcut, Representation::laplace,
                           Representation::axis, Representation::closed}) {
    EXPECT_EQ(representation_from_string(to_string(r)), r);
  }
  EXPECT_THROW(representation_from_string("spectral"), DomainError);
}

TEST(Kernel2d, CriticalCaseAllRepresentations) {
  const DiagParams p(2.0, 0.5, 1.0);
  for (Point q : {Point{0.0, 0.0}, Point{0.7, 0.0}, Point{1.5, 0.4}, Point{0.0, 2.0}}) {
    const double ref = oracle::critical_kernel(2.0, 0.5, q.x, q.y);
    EXPECT_NEAR(eval_closed(p, q.x, q.y).value, ref, 1e-15);
    EXPECT_NEAR(eval_onedim(p, q.x, q.y).value, ref, 1e-8) << q.x << "," << q.y;
    EXPECT_NEAR(eval_laplace(p, q.x, q.y).value, ref, 1e-8) << q.x << "," << q.y;
    EXPECT_NEAR(eval_double(p, q.x, q.y).value, ref, 1e-8) << q.x << "," << q.y;
  }
  EXPECT_NEAR(eval_axis(p, Axis::x, 1.2).value, oracle::critical_kernel(2.0, 0.5, 1.2, 0.0), 1e-8);
  EXPECT_NEAR(eval_axis(p, Axis::y, 0.9).value, oracle::critical_kernel(2.0, 0.5, 0.0, 0.9), 1e-8);
}

TEST(Kernel2d, OnedimMatchesOracleSupercritical) {
  const DiagParams p(1.0, 1.0, 5.0);
  for (Point q : {Point{0.0, 0.5}, Point{1.0, 0.0}, Point{2.0, 0.3}, Point{4.0, 0.7}}) {
    const double ref = oracle::kernel(1.0, 1.0, 5.0, q.x, q.y);
    EXPECT_NEAR(eval_onedim(p, q.x, q.y).value, ref, 1e-7) << q.x << "," << q.y;
  }
}

TEST(Kernel2d, OnedimMatchesOracleSubcritical) {
  const DiagParams p(1.5, 0.8, 0.4);
  for (Point q : {Point{0.5, 0.5}, Point{2.0, 0.1}, Point{0.0, 1.0}}) {
    const double ref = oracle::kernel(1.5, 0.8, 0.4, q.x, q.y);
    EXPECT_NEAR(eval_onedim(p, q.x, q.y).value, ref, 1e-7) << q.x << "," << q.y;
    EXPECT_NEAR(eval_laplace(p, q.x, q.y).value, ref, 1e-7) << q.x << "," << q.y;
  }
}

TEST(Kernel2d, BranchCutAgreesWithOnedim) {
  for (double m : {1.21, 2.0, 5.0}) {
    const DiagParams p(1.0, 1.0, m);
    for (Point q : {Point{1.0, 0.2}, Point{3.0, 0.6}, Point{6.0, 0.4}}) {
      const KernelEval bc = eval_branchcut(m, q.x, q.y);
      const KernelEval od = eval_onedim(p, q.x, q.y);
      EXPECT_NEAR(bc.value, od.value, 1e-8 + 10.0 * (bc.abs_error_estimate + od.abs_error_estimate))
          << "m=" << m << " at " << q.x << "," << q.y;
    }
  }
}

TEST(Kernel2d, ScaledBranchCutIsConsistent) {
  const ScaledEval s = eval_branchcut_scaled(5.0, 3.0, 0.5);
  EXPECT_DOUBLE_EQ(s.log_scale, 3.0);
  EXPECT_NEAR(s.value(), eval_branchcut(5.0, 3.0, 0.5).value, 1e-12);
}

TEST(Kernel2d, AdmissibilityRules) {
  const DiagParams sup(1.0, 1.0, 5.0);
  const DiagParams sub(1.0, 1.0, 0.5);
  EXPECT_FALSE(admissible(Representation::laplace, sup, 1.0, 1.0));
  EXPECT_FALSE(admissible(Representation::closed, sub, 1.0, 1.0));
  EXPECT_FALSE(admissible(Representation::branchcut, sub, 1.0, 1.0));
  EXPECT_FALSE(admissible(Representation::branchcut, sup, 0.0, 1.0));
  EXPECT_FALSE(admissible(Representation::axis, sub, 1.0, 1.0));
  EXPECT_TRUE(admissible(Representation::axis, sub, 1.0, 0.0));
  EXPECT_TRUE(admissible(Representation::onedim, sup, 0.0, 0.0));
  EXPECT_THROW(eval_with(Representation::laplace, sup, 1.0, 1.0), DomainError);
  EXPECT_THROW(eval_onedim(sup, -1.0, 0.0), DomainError);
}

TEST(Kernel2d, DispatcherChoices) {
  EXPECT_EQ(eval(DiagParams(1.0, 1.0, 1.0), 1.0, 1.0).representation, Representation::closed);
  EXPECT_EQ(eval(DiagParams(1.0, 1.0, 0.5), 1.0, 1.0).representation, Representation::laplace);
  EXPECT_EQ(eval(DiagParams(1.0, 1.0, 0.5), 5.0, 1.0).representation, Representation::onedim);
  EXPECT_EQ(eval(DiagParams(1.0, 1.0, 5.0), 8.0, 0.5).representation, Representation::branchcut);
  EXPECT_EQ(eval(DiagParams(1.0, 1.0, 5.0), 2.0, 0.5).representation, Representation::onedim);
}

TEST(Kernel2d, CrosscheckPasses) {
  for (double d : {0.3, 1.0, 2.5}) {
    const DiagParams p(1.2, 0.9, d);
    EXPECT_NO_THROW(eval(p, 1.3, 0.4, {}, true)) << d;
  }
}

TEST(Kernel2d, RescalingIdentity) {
  const DiagParams p(2.0, 0.5, 3.0);
  const Rescaling r = rescale(p);
  EXPECT_NEAR(r.m, 3.0, 1e-15);
  const double x = 1.1, y = 0.6;
  const auto [X, Y] = r.map(x, y);
  const auto [xb, yb] = r.unmap(X, Y);
  EXPECT_NEAR(xb, x, 1e-15);
  EXPECT_NEAR(yb, y, 1e-15);
  const double lhs = eval_onedim(p, x, y).value;
  const double rhs = r.prefactor * eval_onedim(DiagParams(1.0, 1.0, r.m), X, Y).value;
  EXPECT_NEAR(lhs, rhs, 1e-9);
}

TEST(Kernel2d, CornerAndEnergy) {
  const DiagParams crit(1.0, 4.0, 4.0);
  EXPECT_NEAR(corner_value(crit), 0.5, 1e-14);
  EXPECT_NEAR(min_energy(crit), 2.0, 1e-13);
  const DiagParams p(1.0, 1.0, 5.0);
  EXPECT_NEAR(corner_value(p), oracle::kernel(1.0, 1.0, 5.0, 0.0, 0.0), 1e-7);
  EXPECT_DOUBLE_EQ(minimizer_value(p, 0.0, 0.0), 1.0);
  EXPECT_NEAR(minimizer_value(p, 1.0, 0.5), eval(p, 1.0, 0.5).value / corner_value(p), 1e-12);
}

TEST(Kernel2d, ScaledEvaluationFarOut) {
  const DiagParams p(1.0, 1.0, 5.0);
  const ScaledEval far = eval_scaled(p, 400.0, 0.1);
  EXPECT_NEAR(far.log_scale, 400.0, 1e-12);
  EXPECT_TRUE(std::isfinite(far.scaled));
  const ScaledEval near = eval_scaled(p, 2.0, 0.3);
  EXPECT_NEAR(near.value(), eval(p, 2.0, 0.3).value, 1e-9);
}

}  // namespace
