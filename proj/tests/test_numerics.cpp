#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "en/errors.hpp"
#include "en/numerics.hpp"
#include "oracles.hpp"

using namespace en;

namespace {

constexpr double kPi = std::numbers::pi;

TEST(Adaptive, PolynomialIsExact) {
  const QuadResult r = integrate_adaptive([](double x) { return x * x * x - 2.0 * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 0.0, 1e-13);
  EXPECT_GT(r.evaluations, 0);
}

TEST(Adaptive, SquareRootEndpoint) {
  const QuadResult r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  EXPECT_LE(std::abs(r.value - 2.0), 10.0 * r.abs_error_estimate + 1e-12);
}

TEST(Adaptive, BudgetIsEnforced) {
  Tolerance tight{1e-15, 1e-15, 100};
  EXPECT_THROW(integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0,
                                  tight),
               BudgetExceeded);
}

TEST(Adaptive, NonFiniteIntegrandThrows) {
  EXPECT_THROW(integrate_adaptive([](double) { return std::numeric_limits<double>::quiet_NaN(); },
                                  0.0, 1.0),
               NonFiniteIntegrand);
}

TEST(SemiInfinite, ExponentialHint) {
  const QuadResult r =
      integrate_semiinfinite([](double x) { return std::exp(-2.0 * x); }, DecayHint::exponential(2.0));
  EXPECT_NEAR(r.value, 0.5, 1e-10);
}

TEST(SemiInfinite, AlgebraicHint) {
  const QuadResult r = integrate_semiinfinite([](double x) { return 1.0 / (1.0 + x * x); },
                                              DecayHint::algebraic(2.0));
  EXPECT_NEAR(r.value, 0.5 * kPi, 1e-10);
}

TEST(SemiInfinite, ShiftedLowerLimit) {
  const QuadResult r = integrate_semiinfinite([](double x) { return std::exp(-x); },
                                              DecayHint::exponential(1.0), {}, 3.0);
  EXPECT_NEAR(r.value, std::exp(-3.0), 1e-11);
}

TEST(Cosine, LorentzianTransform) {
  for (double w : {0.3, 1.0, 7.5}) {
    const QuadResult r = integrate_cosine([](double t) { return 1.0 / (1.0 + t * t); }, w);
    EXPECT_NEAR(r.value, 0.5 * kPi * std::exp(-w), 1e-9) << "omega " << w;
  }
}

TEST(Cosine, AgreesWithHalfPeriodOracle) {
  const auto g = [](double t) { return 1.0 / std::pow(1.0 + t, 1.5); };
  const double w = 2.3;
  const QuadResult r = integrate_cosine(g, w, 0.0, 1.5);
  EXPECT_NEAR(r.value, oracle::cosine_tail(g, w, 0.0, 2000, 64, 16), 1e-7);
}

TEST(Cosine, LowerLimitInsideCycle) {
  const auto g = [](double t) { return 1.0 / (1.0 + t * t); };
  const QuadResult full = integrate_cosine(g, 1.7);
  const double head = oracle::simpson([&](double t) { return g(t) * std::cos(1.7 * t); }, 0.0,
                                      0.9, 2000);
  const QuadResult tail = integrate_cosine(g, 1.7, 0.9);
  EXPECT_NEAR(head + tail.value, full.value, 1e-9);
}

TEST(ClosedForms, PoissonCosine) {
  const double L = 1.3, y = 0.7;
  const double ref = oracle::cosine_tail([&](double e) { return 1.0 / (e * e + L * L); }, y);
  EXPECT_NEAR(poisson_cosine(L, y), 0.5 * kPi / L * std::exp(-L * y), 1e-15);
  EXPECT_NEAR(poisson_cosine(L, y), ref, 1e-6);
}

TEST(ClosedForms, GaussianCosine) {
  const double u = 0.4, x = 1.1;
  const double ref =
      oracle::simpson([&](double e) { return std::exp(-u * e * e) * std::cos(x * e); }, 0.0, 20.0, 4000);
  EXPECT_NEAR(gaussian_cosine(u, x), ref, 1e-10);
}

TEST(Bessel, J0KnownValues) {
  EXPECT_DOUBLE_EQ(bessel_j0(0.0), 1.0);
  EXPECT_NEAR(bessel_j0(1.0), 0.7651976865579666, 1e-14);
  EXPECT_NEAR(bessel_j0(10.0), -0.2459357644513483, 1e-13);
  EXPECT_NEAR(bessel_j0(2.404825557695773), 0.0, 1e-14);
}

TEST(Bessel, J0MatchesIntegralRepresentation) {
  for (double z : {0.5, 3.0, 25.0}) {
    const double ref =
        oracle::simpson([z](double th) { return std::cos(z * std::sin(th)); }, 0.0, kPi, 2000) / kPi;
    EXPECT_NEAR(bessel_j0(z), ref, 1e-12) << z;
  }
}

TEST(Bessel, ScaledI0) {
  EXPECT_DOUBLE_EQ(bessel_i0_scaled(0.0), 1.0);
  for (double z : {0.2, 2.0, 15.0, 60.0}) {
    const double ref =
        oracle::simpson([z](double th) { return std::exp(z * (std::cos(th) - 1.0)); }, 0.0, kPi, 4000) /
        kPi;
    EXPECT_NEAR(bessel_i0_scaled(z) / ref, 1.0, 1e-11) << z;
  }
  const double z = 1e6;
  EXPECT_NEAR(bessel_i0_scaled(z) * std::sqrt(2.0 * kPi * z), 1.0 + 1.0 / (8.0 * z), 1e-10);
}

TEST(PhiN, LowOrdersHaveClosedForms) {
  EXPECT_NEAR(phi_n(1, 2.5), std::exp(2.5), 1e-12);
  // Φ_2(z) = I_0(2√z).
  const double z = 3.0;
  EXPECT_NEAR(phi_n(2, z), bessel_i0_scaled(2.0 * std::sqrt(z)) * std::exp(2.0 * std::sqrt(z)), 1e-11);
  EXPECT_DOUBLE_EQ(phi_n(3, 0.0), 1.0);
}

TEST(PhiN, LogFormIsConsistent) {
  for (int n : {1, 2, 3, 4}) {
    EXPECT_NEAR(log_phi_n(n, 5.0), std::log(phi_n(n, 5.0)), 1e-12) << n;
  }
  EXPECT_NEAR(log_phi_n(1, 2000.0), 2000.0, 1e-9);
  EXPECT_TRUE(std::isfinite(log_phi_n(3, 1e8)));
}

}  // namespace
