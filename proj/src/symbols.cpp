#include "en/symbols.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace en {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

DiagParams::DiagParams(double a, double c, double d) : a_(a), c_(c), d_(d) {
  if (!positive_finite(a) || !positive_finite(c) || !positive_finite(d)) {
    throw DomainError("DiagParams: a, c, d must be positive and finite");
  }
}

bool DiagParams::critical(double rel_tol) const {
  const double ac = a_ * c_;
  return std::abs(d_ - ac) <= rel_tol * std::max(ac, d_);
}

NonDiagParams::NonDiagParams(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (!positive_finite(a) || !positive_finite(c) || !positive_finite(d) || !std::isfinite(b)) {
    throw DomainError("NonDiagParams: a, c, d must be positive and b finite");
  }
  if (!(a * c - b * b > 0.0)) throw DomainError("NonDiagParams: need ac - b^2 > 0");
}

ProductParams::ProductParams(Eigen::VectorXd alphas, double d) : alphas_(std::move(alphas)), d_(d) {
  if (alphas_.size() < 2) throw DomainError("ProductParams: need n >= 2");
  for (Eigen::Index j = 0; j < alphas_.size(); ++j) {
    if (!positive_finite(alphas_[j])) throw DomainError("ProductParams: alphas must be positive");
  }
  if (!positive_finite(d)) throw DomainError("ProductParams: d must be positive");
}

double beta_cut(double m, double t) {
  if (!(m > 1.0)) throw DomainError("beta_cut: need m > 1");
  if (!(t > 1.0 && t * t < m)) throw DomainError("beta_cut: need 1 < t < sqrt(m)");
  return std::sqrt((m - t * t) / (t * t - 1.0));
}

std::complex<double> q_upper_half(double m, std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw DomainError("q_upper_half: need Im z > 0");
  if (z.real() == 0.0 && z.imag() >= 1.0 && z.imag() * z.imag() <= m) {
    throw DomainError("q_upper_half: z lies on the slit [i, i sqrt(m)]");
  }
  const std::complex<double> z2 = z * z;
  return (z2 + m) / (z2 + 1.0);
}

double cm_mixed_derivative(const DiagParams& p, int order, double s, double t) {
  const double mu = p.d() - p.a() * p.c();
  if (!(mu > 0.0)) throw DomainError("cm_mixed_derivative: need d > ac");
  if (order < 1) throw DomainError("cm_mixed_derivative: order must be >= 1");
  if (s < 0.0 || t < 0.0) throw DomainError("cm_mixed_derivative: need s, t >= 0");
  const double sc = s + p.c();
  const double ta = t + p.a();
  const double k = static_cast<double>(order);
  // k! (t+a)^{k-1} ((s+c)(t+a) - kμ) / ((s+c)(t+a) + μ)^{k+2}, assembled in logs.
  const double log_mag = std::lgamma(k + 1.0) + (k - 1.0) * std::log(ta) -
                         (k + 2.0) * std::log(sc * ta + mu);
  return std::exp(log_mag) * (sc * ta - k * mu);
}

std::optional<int> cm_violation_order(const DiagParams& p) {
  const double mu = p.d() - p.a() * p.c();
  if (!(mu > 0.0)) return std::nullopt;
  const double ratio = p.a() * p.c() / mu;
  return static_cast<int>(std::floor(ratio)) + 1;
}

}  // namespace en
