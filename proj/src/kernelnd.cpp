#include "en/kernelnd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "en/errors.hpp"
#include "en/kernel2d.hpp"

namespace en {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaussianCut = 40.0;
constexpr Eigen::Index kMaxLaplaceDim = 4;

void check_face(const ProductParams& p, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= p.n() || j >= p.n() || i == j) {
    throw DomainError("face indices must be distinct and within the dimension");
  }
}

// Iterated integral over s_0..s_{n-1} of
//   exp(-Σ α_k s_k² - Σ x_k²/(4 s_k²) + log Φ_n(ν Π s_k²)).
class LaplaceIntegrand {
 public:
  LaplaceIntegrand(const ProductParams& p, const Eigen::VectorXd& x, const Tolerance& tol)
      : alpha_(p.alphas()), x_(x), nu_(std::max(p.A() - p.d(), 0.0)), n_(static_cast<int>(p.n())),
        tol_(tol) {
    // Weighted AM-GM: n (νΠs²)^{1/n} <= θ Σ α_k s_k² with θ = (ν/A)^{1/n} < 1.
    theta_ = std::pow(nu_ / p.A(), 1.0 / n_);
    limits_ = (kGaussianCut / ((1.0 - theta_) * alpha_.array())).sqrt();
  }

  NdEval run() {
    const QuadResult r = level(0, 0.0, 1.0);
    const double scale = std::pow(2.0, n_) / std::pow(kPi, 0.5 * n_);
    // Mass outside the box: each cut coordinate loses at most erfc(√cut) of a
    // Gaussian with rate (1-θ)α_k.
    double box = 1.0;
    for (int k = 0; k < n_; ++k) box *= 0.5 * std::sqrt(kPi / ((1.0 - theta_) * alpha_[k]));
    const double tail = n_ * std::erfc(std::sqrt(kGaussianCut)) * box;
    return {scale * r.value, scale * (r.abs_error_estimate + tail + inner_error_),
            evaluations_};
  }

 private:
  // exponent_sum accumulates -α s² - x²/(4s²); product accumulates Π s².
  QuadResult level(int k, double exponent_sum, double product) {
    const bool last = k == n_ - 1;
    double cell = 1.0;
    for (int j = k + 1; j < n_; ++j) cell *= limits_[j];
    auto f = [&, k](double s) -> double {
      const double s2 = s * s;
      double e = exponent_sum - alpha_[k] * s2;
      if (x_[k] != 0.0) {
        if (s == 0.0) return 0.0;
        e -= x_[k] * x_[k] / (4.0 * s2);
      }
      if (last) {
        ++evaluations_;
        const double z = nu_ * product * s2;
        return std::exp(e + (z > 0.0 ? log_phi_n(n_, z) : 0.0));
      }
      const QuadResult inner = level(k + 1, e, product * s2);
      inner_error_ = std::max(inner_error_, inner.abs_error_estimate * cell);
      return inner.value;
    };
    const Tolerance t = k == 0 ? tol_ : tol_.scaled(1e-2);
    if (evaluations_ > tol_.max_evaluations) {
      throw BudgetExceeded("kernel_nd_laplace: evaluation budget exhausted");
    }
    return integrate_adaptive(f, 0.0, limits_[k], t);
  }

  const Eigen::VectorXd& alpha_;
  const Eigen::VectorXd& x_;
  double nu_;
  int n_;
  Tolerance tol_;
  double theta_ = 0.0;
  Eigen::ArrayXd limits_;
  double inner_error_ = 0.0;
  long evaluations_ = 0;
};

// e^{√c x} K_{a,c,d}(x, y), with c fixed across calls so the scale is shared.
ScaledEval slice_scaled(const DiagParams& q, double x, double y, const Tolerance& tol) {
  if (x == 0.0) {
    const KernelEval k = eval(q, x, y, tol);
    return {k.value, k.abs_error_estimate, 0.0, k.evaluations};
  }
  const double log_scale = std::sqrt(q.c()) * x;
  if (q.critical()) {
    return {std::exp(-std::sqrt(q.a()) * y) / std::sqrt(q.a() * q.c()), 0.0, log_scale, 1};
  }
  return eval_scaled(q, x, y, tol);
}

}  // namespace

Verdict classify_nd(const ProductParams& p) {
  return p.subcritical() ? Verdict::positive : Verdict::sign_changing;
}

NdEval kernel_nd_laplace(const ProductParams& p, const Eigen::VectorXd& x, const Tolerance& tol) {
  if (p.n() > kMaxLaplaceDim) throw DomainError("kernel_nd_laplace: n > 4 is out of range");
  if (x.size() != p.n()) throw DomainError("kernel_nd_laplace: dimension mismatch");
  if (!p.subcritical()) throw DomainError("kernel_nd_laplace: needs d <= prod(alpha)");
  if (!(x.array() >= 0.0).all() || !x.allFinite()) {
    throw DomainError("kernel_nd_laplace: coordinates must be finite and >= 0");
  }
  return LaplaceIntegrand(p, x, tol).run();
}

FaceReduction face_reduce(const ProductParams& p, Eigen::Index i, Eigen::Index j) {
  check_face(p, i, j);
  if (p.subcritical()) throw DomainError("face_reduce: needs d > prod(alpha)");
  const Eigen::VectorXd& alpha = p.alphas();
  const double rest = p.A() / (alpha[i] * alpha[j]);
  return {i, j, DiagParams(alpha[j], alpha[i], alpha[i] * alpha[j] + p.mu() / rest), 1.0 / rest};
}

FaceWitness face_negative_witness(const ProductParams& p, Eigen::Index i, Eigen::Index j,
                                  const Tolerance& tol) {
  FaceWitness out{face_reduce(p, i, j), {}};
  out.point = negative_witness(out.face.reduced, tol);
  const double f = out.face.prefactor;
  out.point.value *= f;
  out.point.abs_error_estimate *= f;
  out.point.scaled_value *= f;
  out.point.scaled_error *= f;
  return out;
}

std::vector<AbelPoint> abel_face_check(const ProductParams& p, Eigen::Index i, Eigen::Index j,
                                       double x_i, double x_j, const std::vector<double>& eps,
                                       const Tolerance& tol) {
  if (p.n() != 3) throw DomainError("abel_face_check: needs n = 3");
  check_face(p, i, j);
  if (p.subcritical()) throw DomainError("abel_face_check: needs d > prod(alpha)");
  if (!(x_i >= 0.0 && x_j >= 0.0)) throw DomainError("abel_face_check: need x >= 0");
  const Eigen::Index k = 3 - i - j;
  const Eigen::VectorXd& alpha = p.alphas();
  const double log_scale = x_i == 0.0 ? 0.0 : std::sqrt(alpha[i]) * x_i;

  std::vector<AbelPoint> out;
  out.reserve(eps.size());
  for (double e : eps) {
    if (!(e > 0.0)) throw DomainError("abel_face_check: eps must be positive");
    // ξ_k = ε tan θ turns P_ε dξ_k into dθ; each slice is a 2-D kernel with
    // d = α_i α_j + μ/(ξ_k² + α_k).
    double slice_error = 0.0;
    auto slice = [&](double theta) {
      const double xi = e * std::tan(theta);
      const double weight = xi * xi + alpha[k];
      const DiagParams q(alpha[j], alpha[i], alpha[i] * alpha[j] + p.mu() / weight);
      const ScaledEval s = slice_scaled(q, x_i, x_j, tol);
      slice_error = std::max(slice_error, s.scaled_error / weight);
      return s.scaled / weight;
    };
    const QuadResult r = integrate_adaptive(slice, 0.0, 0.5 * kPi, tol);
    AbelPoint a;
    a.eps = e;
    a.scaled_value = (2.0 / kPi) * r.value;
    a.scaled_error = (2.0 / kPi) * r.abs_error_estimate + slice_error;
    a.log_scale = log_scale;
    a.value = a.scaled_value * std::exp(-log_scale);
    a.abs_error_estimate = a.scaled_error * std::exp(-log_scale);
    out.push_back(a);
  }
  return out;
}

}  // namespace en
