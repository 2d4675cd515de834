#pragma once

// Quadrature engines and the special functions used by the kernel formulas.

#include <functional>

namespace en {

struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  long max_evaluations = 10'000'000;

  /// Target accuracy for a result of magnitude `value`.
  [[nodiscard]] double target(double value) const;
  /// Same budget, tolerances scaled by `factor` (used to split a global target).
  [[nodiscard]] Tolerance scaled(double factor) const;
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;

  QuadResult& operator+=(const QuadResult& other) {
    value += other.value;
    abs_error_estimate += other.abs_error_estimate;
    evaluations += other.evaluations;
    return *this;
  }
};

using RealFunction = std::function<double(double)>;

/// Decay class of an integrand on a half-line.
struct DecayHint {
  enum class Kind { exponential, algebraic };
  Kind kind = Kind::exponential;
  /// Exponential: rate r in |f(x)| <~ e^{-r x}. Algebraic: power p > 1 in |f(x)| <~ x^{-p}.
  double parameter = 1.0;

  static DecayHint exponential(double rate = 1.0) { return {Kind::exponential, rate}; }
  static DecayHint algebraic(double power) { return {Kind::algebraic, power}; }
};

/// Globally adaptive Gauss-Kronrod (10/21) integration of f over [lo, hi].
///
/// Panels are bisected in order of decreasing error estimate until the summed
/// estimate meets tol.target(|value|). The panel error is |K21 - G10|, floored
/// at a round-off level. Endpoint singularities of order <= 1/2 are handled by
/// repeated bisection since no rule evaluates the endpoints.
///
/// Throws BudgetExceeded when tol.max_evaluations is hit first and
/// NonFiniteIntegrand when f returns NaN/inf at a node.
QuadResult integrate_adaptive(const RealFunction& f, double lo, double hi,
                              const Tolerance& tol = {});

/// Integral of f over [lo, inf).
///
/// Exponential hint: adaptive integration on growing windows [lo, T] until the
/// tail bound |f(T)| / r is below the target; the bound is added to the error.
/// Algebraic hint: the map x = lo + t/(1-t) onto [0, 1).
/// Throws TailBoundUnavailable when samples contradict the hint.
QuadResult integrate_semiinfinite(const RealFunction& f, DecayHint hint,
                                  const Tolerance& tol = {}, double lo = 0.0);

/// Fourier-cosine integral  ∫_lo^∞ g(t) cos(ω t) dt  for a smooth g decaying at
/// least like t^{-decay_power}.
///
/// The half-line is cut into cycles holding an odd number of half periods, so
/// cycle contributions alternate in sign; the partial sums are accelerated
/// with Wynn's epsilon algorithm. ω = 0 falls back to the algebraic map.
QuadResult integrate_cosine(const RealFunction& g, double omega, double lo = 0.0,
                            double decay_power = 2.0, const Tolerance& tol = {});

/// ∫_0^∞ cos(yη)/(η²+Λ²) dη = (π/(2Λ)) e^{-Λy}.
double poisson_cosine(double Lambda, double y);

/// ∫_0^∞ e^{-uξ²} cos(xξ) dξ = (√π/(2√u)) e^{-x²/(4u)}.
double gaussian_cosine(double u, double x);

double bessel_j0(double z);

/// e^{-z} I_0(z); finite for every representable z >= 0.
double bessel_i0_scaled(double z);

/// Φ_n(z) = Σ_k z^k / (k!)^n. Throws std::overflow_error if not representable.
double phi_n(int n, double z);

/// log Φ_n(z), safe for large z.
double log_phi_n(int n, double z);

}  // namespace en
