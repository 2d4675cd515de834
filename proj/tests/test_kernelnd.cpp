#include <gtest/gtest.h>

#include <cmath>

#include "en/errors.hpp"
#include "en/kernel2d.hpp"
#include "en/kernelnd.hpp"
#include "oracles.hpp"

using namespace en;

namespace {

// Three nested adaptive levels need more than the default evaluation budget.
const Tolerance kNested{1e-10, 1e-8, 100'000'000};

ProductParams make(std::initializer_list<double> alphas, double d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(alphas.size()));
  Eigen::Index k = 0;
  for (double a : alphas) v[k++] = a;
  return {v, d};
}

TEST(KernelNd, Verdicts) {
  EXPECT_EQ(classify_nd(make({1.0, 1.0, 2.0}, 2.0)), Verdict::positive);
  EXPECT_EQ(classify_nd(make({1.0, 1.0, 2.0}, 1.0)), Verdict::positive);
  EXPECT_EQ(classify_nd(make({1.0, 1.0, 2.0}, 4.0)), Verdict::sign_changing);
}

TEST(KernelNd, SeparableWhenMuVanishes) {
  // W = Π(ξ_j² + α_j): the kernel is a product of one-dimensional Poisson kernels.
  const ProductParams p = make({1.0, 2.0, 0.5}, 1.0);
  const Eigen::Vector3d x(0.4, 0.3, 0.8);
  double ref = 1.0;
  for (int k = 0; k < 3; ++k) {
    const double a = p.alphas()[k];
    ref *= std::exp(-std::sqrt(a) * x[k]) / std::sqrt(a);
  }
  const NdEval e = kernel_nd_laplace(p, x, kNested);
  EXPECT_NEAR(e.value, ref, 1e-7);
}

TEST(KernelNd, TwoDimensionsMatchPlanarKernel) {
  // n = 2 with alphas (α1, α2) is K_{a,c,d} with a = α2, c = α1.
  const ProductParams p = make({0.8, 1.5}, 0.6);
  const Eigen::Vector2d x(0.7, 0.4);
  const double ref = oracle::kernel(1.5, 0.8, 0.6, 0.7, 0.4);
  EXPECT_NEAR(kernel_nd_laplace(p, x).value, ref, 1e-7);
}

TEST(KernelNd, LaplaceFormIsPositive) {
  const ProductParams p = make({1.0, 1.0, 2.0}, 0.5);
  for (double s : {0.0, 1.5}) {
    const NdEval e = kernel_nd_laplace(p, Eigen::Vector3d(s, 2.0 * s, 0.5), kNested);
    EXPECT_GT(e.value, 0.0) << s;
  }
}

TEST(KernelNd, LaplaceRejectsBadInput) {
  EXPECT_THROW(kernel_nd_laplace(make({1.0, 1.0, 2.0}, 3.0), Eigen::Vector3d::Zero()), DomainError);
  EXPECT_THROW(kernel_nd_laplace(make({1.0, 1.0}, 0.5), Eigen::Vector3d::Zero()), DomainError);
  EXPECT_THROW(kernel_nd_laplace(make({1, 1, 1, 1, 1}, 0.5), Eigen::VectorXd::Zero(5)),
               DomainError);
}

TEST(FaceReduction, Coefficients) {
  const ProductParams p = make({1.0, 3.0, 2.0}, 10.0);  // A = 6, μ = 4
  const FaceReduction f = face_reduce(p, 0, 2);
  EXPECT_DOUBLE_EQ(f.reduced.a(), 2.0);
  EXPECT_DOUBLE_EQ(f.reduced.c(), 1.0);
  EXPECT_NEAR(f.reduced.d(), 2.0 + 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(f.prefactor, 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(f.reduced.supercritical());
  EXPECT_THROW(face_reduce(p, 1, 1), DomainError);
  EXPECT_THROW(face_reduce(make({1.0, 1.0, 2.0}, 1.0), 0, 1), DomainError);
}

TEST(FaceReduction, WitnessIsCertified) {
  const ProductParams p = make({1.0, 1.0, 2.0}, 4.0);
  const FaceWitness w = face_negative_witness(p, 0, 1);
  EXPECT_TRUE(w.point.certified());
  EXPECT_NEAR(w.point.scaled_value, -0.01427085, 1e-6);
  // The face value is the reduced planar kernel times the prefactor.
  const double planar = eval(w.face.reduced, w.point.x, w.point.y).value;
  EXPECT_NEAR(w.point.value, w.face.prefactor * planar, 1e-12);
}

TEST(AbelAverage, ApproachesFaceValue) {
  const ProductParams p = make({1.0, 1.0, 2.0}, 4.0);
  const FaceWitness w = face_negative_witness(p, 0, 1);
  const std::vector<double> eps{1.0, 0.3, 0.1, 0.03};
  const auto pts = abel_face_check(p, 0, 1, w.point.x, w.point.y, eps);
  ASSERT_EQ(pts.size(), 4u);
  const double expected[] = {-0.00677, -0.01145, -0.01328, -0.01397};
  double last_gap = 1e300;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    EXPECT_NEAR(pts[k].scaled_value, expected[k], 1e-5) << pts[k].eps;
    EXPECT_DOUBLE_EQ(pts[k].log_scale, w.point.log_scale);
    const double gap = std::abs(pts[k].scaled_value - w.point.scaled_value);
    EXPECT_LT(gap, last_gap);
    last_gap = gap;
  }
  EXPECT_THROW(abel_face_check(make({1.0, 1.0}, 4.0), 0, 1, 1.0, 1.0, eps), DomainError);
}

}  // namespace
