#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "en/errors.hpp"
#include "en/evolve.hpp"
#include "oracles.hpp"

using namespace en;

namespace {

double gaussian(double x) { return std::exp(-0.5 * x * x); }

TEST(State, SamplingAndValidation) {
  const EvolutionState s = EvolutionState::sample(gaussian, 10.0, 256);
  EXPECT_EQ(s.size(), 256);
  EXPECT_DOUBLE_EQ(s.x(0), -10.0);
  EXPECT_DOUBLE_EQ(s.dx(), 20.0 / 256.0);
  EXPECT_THROW(EvolutionState::sample(gaussian, 10.0, 100), DomainError);
  EXPECT_THROW(EvolutionState::sample(gaussian, -1.0, 64), DomainError);
}

TEST(Spectrum, GaussianIsSelfDual) {
  const EvolutionState s = EvolutionState::sample(gaussian, 20.0, 512);
  const Spectrum sp = spectrum(s);
  EXPECT_NEAR(sp.dxi, std::numbers::pi / 20.0, 1e-15);
  for (Eigen::Index k = 0; k < sp.xi.size(); ++k) {
    EXPECT_NEAR(std::abs(sp.coeff[k]), gaussian(sp.xi[k]), 1e-12) << sp.xi[k];
  }
}

TEST(Spectrum, SobolevNormsMatchPhysicalSide) {
  // ‖u‖_{H^1}² = ∫ u² + u'² for u = e^{-x²/2}.
  const EvolutionState s = EvolutionState::sample(gaussian, 20.0, 512);
  const double l2 = oracle::simpson([](double x) { return std::exp(-x * x); }, -20.0, 20.0, 4000);
  const double grad =
      oracle::simpson([](double x) { return x * x * std::exp(-x * x); }, -20.0, 20.0, 4000);
  EXPECT_NEAR(sobolev_norm(s, 0.0), std::sqrt(l2), 1e-10);
  EXPECT_NEAR(sobolev_norm(s, 1.0), std::sqrt(l2 + grad), 1e-10);
}

TEST(Spectrum, ModeEnergyRatio) {
  const EvolutionState s = EvolutionState::sample(gaussian, 20.0, 512);
  const double r = mode_energy_ratio(s, 1.0);
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1.0);
  EXPECT_LT(mode_energy_ratio(s, 5.0), 1e-8);
}

TEST(Multiplier, BoundsAndShape) {
  const DiagParams p(1.0, 1.0, 5.0);
  const MultiplierBounds b = multiplier_bounds(p);
  EXPECT_DOUBLE_EQ(b.m_low, 1.0);
  EXPECT_NEAR(b.m_high, std::sqrt(5.0), 1e-15);
  const Multiplier lam = decaying_multiplier(p);
  for (double xi : {0.0, 0.5, 3.0, 100.0}) {
    EXPECT_GE(lam(xi), b.m_low - 1e-15);
    EXPECT_LE(lam(xi), b.m_high + 1e-15);
    EXPECT_NEAR(lam(xi), lambda_real(p, xi), 1e-15);
  }
}

TEST(Multiplier, NonDiagonalReducesToDiagonal) {
  const NonDiagParams q(1.0, 0.0, 2.0, 3.0);
  const DiagParams p(1.0, 2.0, 3.0);
  for (double xi : {0.0, 0.7, 4.0}) {
    const auto z = multiplier_nondiag(q, xi);
    EXPECT_NEAR(z.real(), lambda_real(p, xi), 1e-14);
    EXPECT_DOUBLE_EQ(z.imag(), 0.0);
  }
  // With b ≠ 0 the multiplier is a root of (ξ²+c)λ² - 2ibξλ - (aξ²+d) = 0.
  const NonDiagParams r(1.0, 0.3, 2.0, 3.0);
  const double xi = 1.3;
  const auto lam = multiplier_nondiag(r, xi);
  const auto poly = (xi * xi + 2.0) * lam * lam - 2.0 * std::complex<double>(0.0, 0.3) * xi * lam -
                    (xi * xi + 3.0);
  EXPECT_NEAR(std::abs(poly), 0.0, 1e-13);
}

TEST(Evolution, ConstantSymbolScalesExactly) {
  const EvolutionState s = EvolutionState::sample(gaussian, 10.0, 128);
  const EvolutionState later = evolve_step(s, [](double) { return 0.7; }, 2.0);
  EXPECT_NEAR((later.samples - std::exp(-1.4) * s.samples).cwiseAbs().maxCoeff(), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(later.t, 2.0);
}

TEST(Evolution, SemigroupProperty) {
  const DiagParams p(1.0, 1.0, 5.0);
  const EvolutionState s = EvolutionState::sample([](double x) { return std::exp(-std::abs(x)); },
                                                  15.0, 256);
  const EvolutionState once = evolve_step(s, p, 1.0);
  const EvolutionState twice = evolve_step(evolve_step(s, p, 0.4), p, 0.6);
  EXPECT_LT((once.samples - twice.samples).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Evolution, NoSmoothingBoundsHold) {
  const DiagParams p(1.0, 1.0, 5.0);
  const EvolutionState s = EvolutionState::sample([](double x) { return std::exp(-std::abs(x)); },
                                                  20.0, 1024);
  const NoSmoothingReport rep = no_smoothing_check(s, p, 1.0, {0.0, 1.0, 2.0});
  EXPECT_TRUE(rep.passed());
  EXPECT_GE(rep.min_mode_ratio, std::exp(-rep.bounds.m_high) * (1.0 - 1e-12));
  EXPECT_LE(rep.max_mode_ratio, std::exp(-rep.bounds.m_low) * (1.0 + 1e-12));
}

TEST(Evolution, CorruptedSymbolIsDetected) {
  const DiagParams p(1.0, 1.0, 5.0);
  const EvolutionState s = EvolutionState::sample(gaussian, 20.0, 512);
  const Multiplier lam = decaying_multiplier(p);
  const Multiplier bad = [lam](double xi) { return lam(xi) - 0.5; };
  EXPECT_FALSE(no_smoothing_check(s, p, 1.0, {0.0}, bad).passed());
}

TEST(Csv, Rows) {
  std::ostringstream out;
  write_csv(out, EvolutionState::sample(gaussian, 1.0, 4));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,u");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

}  // namespace
