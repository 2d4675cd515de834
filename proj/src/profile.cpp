#include "en/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "en/errors.hpp"
#include "en/kernel2d.hpp"

namespace en {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBisectionWidth = 1e-6;

// First form with u = w², split at w = α. The outer piece has Gaussian decay;
// on the inner piece w = α/v turns the oscillation into cos v on [1, ∞).
QuadResult first_form(double alpha, const Tolerance& tol) {
  auto outer = [alpha](double w) { return 2.0 * std::exp(-w * w) * std::cos(alpha / w); };
  QuadResult total = integrate_adaptive(outer, alpha, alpha + 7.0, tol.scaled(0.5));
  total.abs_error_estimate += std::erfc(alpha + 7.0) * std::sqrt(kPi);
  if (alpha > 0.0) {
    auto inner = [alpha](double v) {
      return 2.0 * alpha * std::exp(-alpha * alpha / (v * v)) / (v * v);
    };
    total += integrate_cosine(inner, 1.0, 1.0, 2.0, tol.scaled(0.5));
  }
  return total;
}

QuadResult second_form(double alpha, const Tolerance& tol) {
  auto g = [alpha](double t) {
    if (t == 0.0) return 0.0;
    return 2.0 * alpha * std::exp(-alpha * alpha / (t * t)) / (t * t);
  };
  return integrate_cosine(g, 1.0, 0.0, 2.0, tol);
}

}  // namespace

ProfileEval h_eval(double alpha, const Tolerance& tol) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("h_value: need alpha >= 0");
  const QuadResult first = first_form(alpha, tol);
  if (alpha == 0.0) {
    // The second form degenerates to 0·∞; its limit is the Gaussian integral.
    return {first.value, first.abs_error_estimate, std::sqrt(kPi), first.evaluations};
  }
  const QuadResult second = second_form(alpha, tol);
  const double gap = std::abs(first.value - second.value);
  const double allowed =
      std::max(1e-8, 10.0 * (first.abs_error_estimate + second.abs_error_estimate));
  if (gap > allowed) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "profile forms disagree at alpha = " << alpha << ": " << first.value << " vs "
        << second.value;
    throw ConsistencyError(msg.str());
  }
  return {first.value, first.abs_error_estimate, second.value,
          first.evaluations + second.evaluations};
}

double h_value(double alpha, const Tolerance& tol) { return h_eval(alpha, tol).value; }

double h_asymptotic(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("h_asymptotic: need alpha > 0");
  const double z = std::cbrt(alpha * alpha);
  return 2.0 * std::sqrt(kPi / 3.0) * std::exp(-kProfileSigma * z) * std::cos(kProfileTau * z);
}

std::vector<ZeroBracket> h_zero_scan(double alpha_max, double step, const Tolerance& tol) {
  if (!(alpha_max > 0.0)) throw DomainError("h_zero_scan: need alpha_max > 0");
  if (!(step > 0.0 && step <= 0.1)) throw DomainError("h_zero_scan: need 0 < step <= 0.1");

  std::vector<ZeroBracket> out;
  const long cells = static_cast<long>(std::ceil(alpha_max / step - 1e-12));
  ProfileEval left = h_eval(0.0, tol);
  for (long i = 0; i < cells; ++i) {
    const double lo = step * static_cast<double>(i);
    const double hi = std::min(alpha_max, step * static_cast<double>(i + 1));
    const ProfileEval right = h_eval(hi, tol);
    if (std::signbit(left.value) != std::signbit(right.value)) {
      double a = lo;
      double b = hi;
      ProfileEval fa = left;
      ProfileEval fb = right;
      while (b - a > kBisectionWidth) {
        const double mid = 0.5 * (a + b);
        const ProfileEval fm = h_eval(mid, tol);
        if (std::signbit(fm.value) == std::signbit(fa.value)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
          fb = fm;
        }
      }
      const bool uncertain = std::abs(fa.value) <= fa.abs_error_estimate ||
                             std::abs(fb.value) <= fb.abs_error_estimate;
      out.push_back({a, b, uncertain});
    }
    left = right;
  }
  return out;
}

LayerScale LayerScale::from_m(double m) {
  if (!(m > 1.0) || !std::isfinite(m)) throw DomainError("LayerScale: need m > 1");
  LayerScale s;
  s.m = m;
  s.A_m = std::sqrt(0.5 * (m - 1.0));
  s.L_m = kPi / s.A_m;
  s.limit_prefactor = 2.0 / (kPi * std::sqrt(2.0 * (m - 1.0)));
  return s;
}

double layer_limit(const LayerScale& scale, double rho, const Tolerance& tol) {
  if (!(rho >= 0.0)) throw DomainError("layer_limit: need rho >= 0");
  return scale.limit_prefactor * h_value(scale.A_m * rho, tol);
}

double layer_scaled_kernel(const LayerScale& scale, double rho, double x, const Tolerance& tol) {
  if (!(x > 0.0)) throw DomainError("layer_scaled_kernel: need x > 0");
  if (!(rho >= 0.0)) throw DomainError("layer_scaled_kernel: need rho >= 0");
  const double root_x = std::sqrt(x);
  return root_x * eval_branchcut_scaled(scale.m, x, rho / root_x, tol).scaled;
}

double layer_error(const LayerScale& scale, double rho, double x, const Tolerance& tol) {
  return std::abs(layer_scaled_kernel(scale, rho, x, tol) - layer_limit(scale, rho, tol));
}

}  // namespace en
