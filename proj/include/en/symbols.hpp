#pragma once

// Parameter records and the closed-form symbols of the quadratic energy.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <optional>

#include "en/errors.hpp"

namespace en {

/// Coefficients of u_xy² + a u_x² + c u_y² + d u² on the quadrant.
class DiagParams {
 public:
  DiagParams(double a, double c, double d);

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double d() const { return d_; }
  /// Normalised parameter d/(ac); the sign problem depends on it alone.
  [[nodiscard]] double m() const { return d_ / (a_ * c_); }
  /// ac - d; nonnegative exactly on the positive side of the threshold.
  [[nodiscard]] double margin() const { return a_ * c_ - d_; }
  [[nodiscard]] bool critical(double rel_tol = 1e-12) const;
  [[nodiscard]] bool subcritical() const { return d_ <= a_ * c_; }
  [[nodiscard]] bool supercritical(double rel_tol = 1e-12) const {
    return !subcritical() && !critical(rel_tol);
  }
  /// The same energy with the roles of x and y exchanged.
  [[nodiscard]] DiagParams swapped() const { return {c_, a_, d_}; }

 private:
  double a_;
  double c_;
  double d_;
};

/// Adds the cross term 2b u_x u_y; requires ac - b² > 0.
class NonDiagParams {
 public:
  NonDiagParams(double a, double b, double c, double d);

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double d() const { return d_; }
  [[nodiscard]] double beta() const { return b_ / std::sqrt(a_ * c_); }
  [[nodiscard]] double r() const { return std::sqrt(1.0 + beta()); }
  [[nodiscard]] DiagParams diagonal() const { return {a_, c_, d_}; }

 private:
  double a_;
  double b_;
  double c_;
  double d_;
};

/// Product-type n-dimensional family: symbol Π(ξ_j² + α_j) + d - Π α_j.
class ProductParams {
 public:
  ProductParams(Eigen::VectorXd alphas, double d);

  [[nodiscard]] const Eigen::VectorXd& alphas() const { return alphas_; }
  [[nodiscard]] Eigen::Index n() const { return alphas_.size(); }
  [[nodiscard]] double d() const { return d_; }
  [[nodiscard]] double A() const { return alphas_.prod(); }
  /// d - A; positive exactly in the sign-changing regime.
  [[nodiscard]] double mu() const { return d_ - A(); }
  [[nodiscard]] bool subcritical() const { return d_ <= A(); }

 private:
  Eigen::VectorXd alphas_;
  double d_;
};

/// W(ξ,η) = ξ²η² + aξ² + cη² + d.
template <typename Scalar>
Scalar w2(const DiagParams& p, Scalar xi, Scalar eta) {
  const Scalar xi2 = xi * xi;
  const Scalar eta2 = eta * eta;
  return xi2 * eta2 + Scalar(p.a()) * xi2 + Scalar(p.c()) * eta2 + Scalar(p.d());
}

/// M(s,t) = 1/(st + as + ct + d), evaluated as 1/((s+c)(t+a) + (d-ac)).
template <typename Scalar>
Scalar m_reciprocal(const DiagParams& p, Scalar s, Scalar t) {
  return Scalar(1) / ((s + Scalar(p.c())) * (t + Scalar(p.a())) + Scalar(p.d() - p.a() * p.c()));
}

/// The expanded form of m_reciprocal; kept for the agreement check.
template <typename Scalar>
Scalar m_reciprocal_expanded(const DiagParams& p, Scalar s, Scalar t) {
  return Scalar(1) / (s * t + Scalar(p.a()) * s + Scalar(p.c()) * t + Scalar(p.d()));
}

/// λ(ξ) = √((aξ² + d)/(ξ² + c)).
template <typename Scalar>
Scalar lambda_real(const DiagParams& p, Scalar xi) {
  using std::sqrt;
  const Scalar xi2 = xi * xi;
  return sqrt((Scalar(p.a()) * xi2 + Scalar(p.d())) / (xi2 + Scalar(p.c())));
}

/// β_m(t) = √((m - t²)/(t² - 1)) on 1 < t < √m.
double beta_cut(double m, double t);

/// q_m(z) = (z² + m)/(z² + 1) on the upper half-plane minus the slit [i, i√m].
std::complex<double> q_upper_half(double m, std::complex<double> z);

/// (-1)^{k+1} ∂_s^k ∂_t M at (s,t), closed form; requires d > ac.
double cm_mixed_derivative(const DiagParams& p, int order, double s, double t);

/// Smallest order k > ac/μ at which the mixed derivative at the origin goes
/// negative; empty when d <= ac (M is completely monotone).
std::optional<int> cm_violation_order(const DiagParams& p);

/// W_{α,d}(ξ) = Π(ξ_j² + α_j) + d - A.
template <typename Derived>
double w_nd(const ProductParams& p, const Eigen::MatrixBase<Derived>& xi) {
  if (xi.size() != p.n()) throw DomainError("w_nd: dimension mismatch");
  return (xi.array().square() + p.alphas().array()).prod() + p.mu();
}

}  // namespace en
