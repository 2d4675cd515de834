#pragma once

// The two-dimensional cosine kernel
//
//   K_{a,c,d}(x,y) = (4/π²) ∫∫ cos(xξ) cos(yη) / W(ξ,η) dξ dη
//
// by several independent representations, plus the normalised minimizer
// u = K / K(0,0) and the minimal energy 1 / K(0,0).

#include <cmath>
#include <string_view>
#include <utility>

#include "en/numerics.hpp"
#include "en/symbols.hpp"

namespace en {

enum class Representation { double_integral, onedim, branchcut, laplace, axis, closed };

std::string_view to_string(Representation rep);
/// Parses the CLI spelling ("double", "onedim", ...); throws DomainError.
Representation representation_from_string(std::string_view name);

struct KernelEval {
  double value = 0.0;
  Representation representation = Representation::onedim;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

/// A kernel value carried as scaled · e^{-log_scale}, for points where the
/// kernel itself underflows or is dwarfed by e^{-x}.
struct ScaledEval {
  double scaled = 0.0;
  double scaled_error = 0.0;
  double log_scale = 0.0;
  long evaluations = 0;

  [[nodiscard]] double value() const { return scaled * std::exp(-log_scale); }
  [[nodiscard]] double error() const { return scaled_error * std::exp(-log_scale); }
};

enum class Axis { x, y };

/// Iterated form of the defining double integral: the inner η-integral is
/// the Poisson cosine integral, the outer ξ-integral is done numerically.
KernelEval eval_double(const DiagParams& p, double x, double y, const Tolerance& tol = {});

/// Single Fourier-cosine integral in ξ with the factor exp(-y λ(ξ)).
KernelEval eval_onedim(const DiagParams& p, double x, double y, const Tolerance& tol = {});

/// Finite cut integral over t in (1, √m) for K_m = K_{1,1,m}; needs m > 1, x > 0.
KernelEval eval_branchcut(double m, double x, double y, const Tolerance& tol = {});

/// e^{x} K_m(x, y) by the cut integral with e^{x} folded into the integrand.
/// The tolerance applies to the scaled value.
ScaledEval eval_branchcut_scaled(double m, double x, double y, const Tolerance& tol = {});

/// Positive Bessel-Laplace double integral; requires d <= ac.
KernelEval eval_laplace(const DiagParams& p, double x, double y, const Tolerance& tol = {});

/// K(x,0) or K(0,y) from the positive double integral over (u, v).
KernelEval eval_axis(const DiagParams& p, Axis axis, double coordinate,
                     const Tolerance& tol = {});

/// (1/√(ac)) e^{-√c x - √a y}; requires the critical case d = ac.
KernelEval eval_closed(const DiagParams& p, double x, double y);

[[nodiscard]] bool admissible(Representation rep, const DiagParams& p, double x, double y);

/// Evaluates with a named representation; throws DomainError if inadmissible.
KernelEval eval_with(Representation rep, const DiagParams& p, double x, double y,
                     const Tolerance& tol = {});

/// Picks the cheapest admissible representation. With crosscheck, a second
/// admissible representation is evaluated as well and ConsistencyError is
/// thrown when they differ by more than max(10·(err1+err2), floor).
KernelEval eval(const DiagParams& p, double x, double y, const Tolerance& tol = {},
                bool crosscheck = false, double crosscheck_floor = 1e-8);

/// Kernel with its natural log-scale e^{-√c x} removed where that matters
/// (supercritical, large x); otherwise log_scale = 0.
ScaledEval eval_scaled(const DiagParams& p, double x, double y, const Tolerance& tol = {});

/// K_{a,c,d}(x,y) = prefactor · K_m(x_factor·x, y_factor·y).
struct Rescaling {
  double m = 1.0;
  double x_factor = 1.0;
  double y_factor = 1.0;
  double prefactor = 1.0;

  [[nodiscard]] std::pair<double, double> map(double x, double y) const {
    return {x_factor * x, y_factor * y};
  }
  [[nodiscard]] std::pair<double, double> unmap(double x, double y) const {
    return {x / x_factor, y / y_factor};
  }
};

Rescaling rescale(const DiagParams& p);

double corner_value(const DiagParams& p, const Tolerance& tol = {});
/// u = K(x,y)/K(0,0); exactly 1 at the corner.
double minimizer_value(const DiagParams& p, double x, double y, const Tolerance& tol = {});
/// J_min = 1 / K(0,0).
double min_energy(const DiagParams& p, const Tolerance& tol = {});

}  // namespace en
