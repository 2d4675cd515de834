#pragma once

// The product-type family with symbol Π(ξ_j² + α_j) + d - Π α_j.

#include <Eigen/Core>
#include <vector>

#include "en/classify.hpp"
#include "en/numerics.hpp"
#include "en/symbols.hpp"

namespace en {

Verdict classify_nd(const ProductParams& p);

struct NdEval {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

/// Positive Laplace form of the n-dimensional kernel for d <= A, n <= 4.
NdEval kernel_nd_laplace(const ProductParams& p, const Eigen::VectorXd& x,
                         const Tolerance& tol = {});

/// Restriction of the symbol to the (i, j) frequency face (0-based indices):
/// K_face = prefactor · K_{a, c, d}(x_i, x_j) with a = α_j, c = α_i.
struct FaceReduction {
  Eigen::Index i = 0;
  Eigen::Index j = 1;
  DiagParams reduced{1.0, 1.0, 1.0};
  double prefactor = 1.0;
};

FaceReduction face_reduce(const ProductParams& p, Eigen::Index i, Eigen::Index j);

struct FaceWitness {
  FaceReduction face;
  /// Witness of the reduced 2-D kernel; values are multiplied by the prefactor.
  Witness point;
};

FaceWitness face_negative_witness(const ProductParams& p, Eigen::Index i, Eigen::Index j,
                                  const Tolerance& tol = {});

struct AbelPoint {
  double eps = 0.0;
  double value = 0.0;
  double abs_error_estimate = 0.0;
  double scaled_value = 0.0;
  double scaled_error = 0.0;
  double log_scale = 0.0;
};

/// L_ε(x_i, x_j) = (2/π)³ ∫ cos(x_i ξ_i) cos(x_j ξ_j) P_ε(ξ_k)/W dξ for n = 3,
/// P_ε(ξ) = ε/(ε² + ξ²). Values share the scale e^{√α_i x_i}.
std::vector<AbelPoint> abel_face_check(const ProductParams& p, Eigen::Index i, Eigen::Index j,
                                       double x_i, double x_j, const std::vector<double>& eps,
                                       const Tolerance& tol = {});

}  // namespace en
