#include "en/kernel2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "en/errors.hpp"

namespace en {

namespace {

constexpr double kPi = std::numbers::pi;

void require_quadrant(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("kernel evaluation needs finite x, y >= 0");
  }
}

// Radial Gaussian-Laplace integral ∫_0^∞ exp(-A ρ² - B/ρ²) dρ.
double radial_gaussian(double A, double B) {
  return 0.5 * std::sqrt(kPi / A) * std::exp(-2.0 * std::sqrt(A * B));
}

}  // namespace

std::string_view to_string(Representation rep) {
  switch (rep) {
    case Representation::double_integral: return "double";
    case Representation::onedim: return "onedim";
    case Representation::branchcut: return "branchcut";
    case Representation::laplace: return "laplace";
    case Representation::axis: return "axis";
    case Representation::closed: return "closed";
  }
  return "unknown";
}

Representation representation_from_string(std::string_view name) {
  for (auto rep : {Representation::double_integral, Representation::onedim,
                   Representation::branchcut, Representation::laplace, Representation::axis,
                   Representation::closed}) {
    if (to_string(rep) == name) return rep;
  }
  throw DomainError("unknown representation '" + std::string(name) + "'");
}

KernelEval eval_double(const DiagParams& p, double x, double y, const Tolerance& tol) {
  require_quadrant(x, y);
  // For fixed ξ: W = (ξ² + c)(η² + Λ²) with Λ² = (aξ² + d)/(ξ² + c).
  auto inner = [&p, y](double xi) {
    const double xi2 = xi * xi;
    const double lambda = std::sqrt((p.a() * xi2 + p.d()) / (xi2 + p.c()));
    return poisson_cosine(lambda, y) / (xi2 + p.c());
  };
  const double scale = 4.0 / (kPi * kPi);
  const QuadResult r = integrate_cosine(inner, x, 0.0, 2.0, tol.scaled(1.0 / scale));
  return {scale * r.value, Representation::double_integral, scale * r.abs_error_estimate,
          r.evaluations};
}

KernelEval eval_onedim(const DiagParams& p, double x, double y, const Tolerance& tol) {
  require_quadrant(x, y);
  auto g = [&p, y](double xi) {
    const double xi2 = xi * xi;
    const double lo = xi2 + p.c();
    const double hi = p.a() * xi2 + p.d();
    return std::exp(-y * std::sqrt(hi / lo)) / std::sqrt(lo * hi);
  };
  const double scale = 2.0 / kPi;
  const QuadResult r = integrate_cosine(g, x, 0.0, 2.0, tol.scaled(1.0 / scale));
  return {scale * r.value, Representation::onedim, scale * r.abs_error_estimate, r.evaluations};
}

ScaledEval eval_branchcut_scaled(double m, double x, double y, const Tolerance& tol) {
  if (!(m > 1.0)) throw DomainError("eval_branchcut: need m > 1");
  if (!(x > 0.0)) throw DomainError("eval_branchcut: need x > 0");
  require_quadrant(x, y);

  const double root_m = std::sqrt(m);
  const double split = 0.5 * (1.0 + root_m);
  const Tolerance piece_tol = tol.scaled(0.5 * kPi / 2.0);

  // Upper piece t in [split, √m] with t = √m - s²; the endpoint root cancels
  // against dt = -2s ds.
  auto upper = [=](double s) {
    const double t = root_m - s * s;
    const double t2m1 = (t - 1.0) * (t + 1.0);
    const double root_plus = std::sqrt(root_m + t);
    const double beta = s * root_plus / std::sqrt(t2m1);
    return 2.0 * std::exp(-x * (t - 1.0)) * std::cos(y * beta) / (std::sqrt(t2m1) * root_plus);
  };
  const QuadResult upper_part =
      integrate_adaptive(upper, 0.0, std::sqrt(root_m - split), piece_tol);

  // Lower piece t in [1, split], written in the cut variable β = β_m(t):
  // t² = (m + β²)/(1 + β²) and dt/(√(t²-1)√(m-t²)) = -dβ/(t(1+β²)).
  const double beta_split = beta_cut(m, split);
  auto lower = [=](double beta) {
    const double b2 = 1.0 + beta * beta;
    const double t = std::sqrt((m + beta * beta) / b2);
    const double t_minus_1 = (m - 1.0) / (b2 * (t + 1.0));
    return std::exp(-x * t_minus_1) / (t * b2);
  };
  const QuadResult lower_part = integrate_cosine(lower, y, beta_split, 2.0, piece_tol);

  const double scale = 2.0 / kPi;
  ScaledEval out;
  out.scaled = scale * (upper_part.value + lower_part.value);
  out.scaled_error = scale * (upper_part.abs_error_estimate + lower_part.abs_error_estimate);
  out.log_scale = x;
  out.evaluations = upper_part.evaluations + lower_part.evaluations;
  return out;
}

KernelEval eval_branchcut(double m, double x, double y, const Tolerance& tol) {
  const double tail = std::exp(-x);
  Tolerance scaled_tol = tol;
  // Absolute accuracy is requested on K, i.e. on e^{x} K times e^{-x}.
  scaled_tol.abs_tol = std::min(tol.abs_tol / std::max(tail, 1e-300), 1e-2);
  const ScaledEval s = eval_branchcut_scaled(m, x, y, scaled_tol);
  return {s.value(), Representation::branchcut, s.error(), s.evaluations};
}

KernelEval eval_laplace(const DiagParams& p, double x, double y, const Tolerance& tol) {
  require_quadrant(x, y);
  if (!p.subcritical()) throw DomainError("eval_laplace: needs d <= ac");
  const double a = p.a();
  const double c = p.c();
  const double root_nu = std::sqrt(std::max(p.margin(), 0.0));
  const double x2 = 0.25 * x * x;
  const double y2 = 0.25 * y * y;

  // u = s², v = r²: integrand exp(-c s² - a r² + 2√ν s r - x²/4s² - y²/4r²) · e^{-z} I0(z)
  // with z = 2√ν s r. For fixed s the r-profile is a Gaussian centred at √ν s / a.
  constexpr double kGaussianCut = 40.0;
  const double r_width = std::sqrt(kGaussianCut / a);
  const double s_max = std::sqrt(kGaussianCut * a / p.d());
  const Tolerance inner_tol = tol.scaled(1e-2);

  long evaluations = 0;
  double inner_error = 0.0;
  auto outer = [&](double s) {
    if (s == 0.0 && x > 0.0) return 0.0;
    const double sx = s == 0.0 ? 0.0 : x2 / (s * s);
    auto inner = [&](double r) {
      if (r == 0.0 && y > 0.0) return 0.0;
      const double ry = r == 0.0 ? 0.0 : y2 / (r * r);
      const double z = 2.0 * root_nu * s * r;
      const double exponent = -c * s * s - a * r * r + z - sx - ry;
      return std::exp(exponent) * bessel_i0_scaled(z);
    };
    const double r_center = root_nu * s / a;
    const QuadResult ri =
        integrate_adaptive(inner, 0.0, r_center + r_width, inner_tol);
    evaluations += ri.evaluations;
    inner_error = std::max(inner_error, ri.abs_error_estimate);
    return ri.value;
  };
  const double scale = 4.0 / kPi;
  const QuadResult ro = integrate_adaptive(outer, 0.0, s_max, tol.scaled(1.0 / scale));
  evaluations += ro.evaluations;

  // Gaussian tails cut at exponent 40: inner ≤ e^{-(d/a)s²} √(π/a)/2 · erfc(√40),
  // outer ≤ √(π/a) · ∫_{s_max}^∞ e^{-(d/a)s²} ds.
  const double inner_tail = 0.5 * std::sqrt(kPi / a) * std::erfc(std::sqrt(kGaussianCut)) *
                            0.5 * std::sqrt(kPi * a / p.d());
  const double outer_tail = std::sqrt(kPi / a) * 0.5 * std::sqrt(kPi * a / p.d()) *
                            std::erfc(std::sqrt(kGaussianCut));
  const double value = scale * ro.value;
  const double error =
      scale * (ro.abs_error_estimate + inner_tail + outer_tail + inner_error * s_max);
  return {value, Representation::laplace, error, evaluations};
}

KernelEval eval_axis(const DiagParams& p, Axis axis, double coordinate, const Tolerance& tol) {
  if (!(coordinate >= 0.0) || !std::isfinite(coordinate)) {
    throw DomainError("eval_axis: coordinate must be finite and >= 0");
  }
  // Along y = 0 the (u, v) integral in polar form (u = ρ²cos²φ, v = ρ²sin²φ)
  // has a closed radial integral; the y-axis is the same with a and c swapped.
  const DiagParams q = axis == Axis::x ? p : p.swapped();
  const double first = q.c();
  const double second = q.d() / q.a();
  auto angular = [=](double phi) {
    const double cs = std::cos(phi);
    const double sn = std::sin(phi);
    const double A = first * cs * cs + second * sn * sn;
    return 4.0 * radial_gaussian(A, 0.25 * coordinate * coordinate);
  };
  const double scale = 1.0 / (std::pow(kPi, 1.5) * std::sqrt(q.a()));
  const QuadResult r = integrate_adaptive(angular, 0.0, 0.5 * kPi, tol.scaled(1.0 / scale));
  return {scale * r.value, Representation::axis, scale * r.abs_error_estimate, r.evaluations};
}

KernelEval eval_closed(const DiagParams& p, double x, double y) {
  require_quadrant(x, y);
  if (!p.critical()) throw DomainError("eval_closed: needs d = ac");
  const double value =
      std::exp(-std::sqrt(p.c()) * x - std::sqrt(p.a()) * y) / std::sqrt(p.a() * p.c());
  return {value, Representation::closed, 0.0, 1};
}

bool admissible(Representation rep, const DiagParams& p, double x, double y) {
  switch (rep) {
    case Representation::double_integral:
    case Representation::onedim: return true;
    case Representation::branchcut: return p.m() > 1.0 && x > 0.0;
    case Representation::laplace: return p.subcritical();
    case Representation::axis: return x == 0.0 || y == 0.0;
    case Representation::closed: return p.critical();
  }
  return false;
}

namespace {

KernelEval branchcut_general(const DiagParams& p, double x, double y, const Tolerance& tol) {
  const Rescaling s = rescale(p);
  const auto [xs, ys] = s.map(x, y);
  Tolerance inner = tol;
  inner.abs_tol = tol.abs_tol / s.prefactor;
  KernelEval k = eval_branchcut(s.m, xs, ys, inner);
  k.value *= s.prefactor;
  k.abs_error_estimate *= s.prefactor;
  return k;
}

}  // namespace

KernelEval eval_with(Representation rep, const DiagParams& p, double x, double y,
                     const Tolerance& tol) {
  if (!admissible(rep, p, x, y)) {
    throw DomainError("representation '" + std::string(to_string(rep)) +
                      "' is not admissible for these parameters");
  }
  switch (rep) {
    case Representation::double_integral: return eval_double(p, x, y, tol);
    case Representation::onedim: return eval_onedim(p, x, y, tol);
    case Representation::branchcut: return branchcut_general(p, x, y, tol);
    case Representation::laplace: return eval_laplace(p, x, y, tol);
    case Representation::axis:
      return x == 0.0 ? eval_axis(p, Axis::y, y, tol) : eval_axis(p, Axis::x, x, tol);
    case Representation::closed: return eval_closed(p, x, y);
  }
  throw DomainError("unknown representation");
}

namespace {

constexpr double kLaplaceRadius = 4.0;
constexpr double kBranchcutThreshold = 5.0;

Representation primary_choice(const DiagParams& p, double x, double y) {
  if (p.critical()) return Representation::closed;
  if (p.subcritical()) {
    return std::hypot(x, y) <= kLaplaceRadius ? Representation::laplace : Representation::onedim;
  }
  if (std::sqrt(p.c()) * x > kBranchcutThreshold) return Representation::branchcut;
  return Representation::onedim;
}

Representation secondary_choice(Representation first, const DiagParams& p, double x, double y) {
  if (first != Representation::onedim) return Representation::onedim;
  if (admissible(Representation::laplace, p, x, y)) return Representation::laplace;
  if (admissible(Representation::branchcut, p, x, y)) return Representation::branchcut;
  if (admissible(Representation::axis, p, x, y)) return Representation::axis;
  return Representation::double_integral;
}

}  // namespace

KernelEval eval(const DiagParams& p, double x, double y, const Tolerance& tol, bool crosscheck,
                double crosscheck_floor) {
  require_quadrant(x, y);
  const Representation first = primary_choice(p, x, y);
  KernelEval result = eval_with(first, p, x, y, tol);
  if (!crosscheck) return result;

  const Representation second = secondary_choice(first, p, x, y);
  const KernelEval other = eval_with(second, p, x, y, tol);
  const double threshold =
      std::max(10.0 * (result.abs_error_estimate + other.abs_error_estimate), crosscheck_floor);
  const double gap = std::abs(result.value - other.value);
  if (gap > threshold) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "representation disagreement: " << to_string(first) << " = " << result.value << ", "
        << to_string(second) << " = " << other.value << ", gap " << gap << " > " << threshold;
    throw ConsistencyError(msg.str());
  }
  result.evaluations += other.evaluations;
  return result;
}

ScaledEval eval_scaled(const DiagParams& p, double x, double y, const Tolerance& tol) {
  require_quadrant(x, y);
  if (p.supercritical() && x > 0.0) {
    const Rescaling s = rescale(p);
    const auto [xs, ys] = s.map(x, y);
    ScaledEval e = eval_branchcut_scaled(s.m, xs, ys, tol);
    e.scaled *= s.prefactor;
    e.scaled_error *= s.prefactor;
    return e;
  }
  const KernelEval k = eval(p, x, y, tol);
  return {k.value, k.abs_error_estimate, 0.0, k.evaluations};
}

Rescaling rescale(const DiagParams& p) {
  return {p.m(), std::sqrt(p.c()), std::sqrt(p.a()), 1.0 / std::sqrt(p.a() * p.c())};
}

double corner_value(const DiagParams& p, const Tolerance& tol) {
  return eval(p, 0.0, 0.0, tol).value;
}

double minimizer_value(const DiagParams& p, double x, double y, const Tolerance& tol) {
  require_quadrant(x, y);
  if (x == 0.0 && y == 0.0) return 1.0;
  return eval(p, x, y, tol).value / corner_value(p, tol);
}

double min_energy(const DiagParams& p, const Tolerance& tol) { return 1.0 / corner_value(p, tol); }

}  // namespace en
