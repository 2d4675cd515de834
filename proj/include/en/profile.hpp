#pragma once

// The boundary-layer profile
//
//   H(α) = ∫_0^∞ e^{-u} u^{-1/2} cos(α/√u) du = 2α ∫_0^∞ t^{-2} e^{-α²/t²} cos t dt
//
// and the comparison of e^x √x K_m(x, ρ/√x) with its limit.

#include <vector>

#include "en/numerics.hpp"

namespace en {

struct ProfileEval {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  /// The same number from the second integral form.
  double alternate = 0.0;
  long evaluations = 0;
};

/// Both integral forms; throws ConsistencyError if they differ by more than
/// max(1e-8, 10·(combined error estimates)).
ProfileEval h_eval(double alpha, const Tolerance& tol = {});
double h_value(double alpha, const Tolerance& tol = {});

/// Leading steepest-descent term (2√π/√3) e^{-σα^{2/3}} cos(τα^{2/3}).
double h_asymptotic(double alpha);

inline constexpr double kProfileSigma = 0.94494078742115487;  // 3 / 2^{5/3}
inline constexpr double kProfileTau = 1.6366854539575821;     // 3√3 / 2^{5/3}

struct ZeroBracket {
  double lo = 0.0;
  double hi = 0.0;
  /// Set when H at an end of the refined bracket is within its error estimate.
  bool uncertain = false;
};

/// Sign changes of H on a uniform grid over [0, alpha_max], each refined by
/// bisection to width 1e-6.
std::vector<ZeroBracket> h_zero_scan(double alpha_max, double step, const Tolerance& tol = {});

struct LayerScale {
  double m = 0.0;
  double A_m = 0.0;
  double L_m = 0.0;
  double limit_prefactor = 0.0;

  /// Throws DomainError unless m > 1.
  static LayerScale from_m(double m);
};

/// limit_prefactor · H(A_m ρ).
double layer_limit(const LayerScale& scale, double rho, const Tolerance& tol = {});

/// e^x √x K_m(x, ρ/√x), with e^x folded into the cut integral.
double layer_scaled_kernel(const LayerScale& scale, double rho, double x,
                           const Tolerance& tol = {});

/// |e^x √x K_m(x, ρ/√x) - layer_limit(scale, ρ)|.
double layer_error(const LayerScale& scale, double rho, double x, const Tolerance& tol = {});

}  // namespace en
