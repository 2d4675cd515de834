#pragma once

// Threshold verdicts, certified negative witnesses and sign maps.

#include <Eigen/Core>
#include <optional>

#include "en/numerics.hpp"
#include "en/symbols.hpp"

namespace en {

enum class Verdict { positive, sign_changing };

const char* to_string(Verdict v);

/// A point where the kernel is certified negative. The value is also carried
/// in scaled form (value = scaled_value · e^{-log_scale}) since it underflows
/// for large x.
struct Witness {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  double abs_error_estimate = 0.0;
  double scaled_value = 0.0;
  double scaled_error = 0.0;
  double log_scale = 0.0;

  [[nodiscard]] bool certified() const { return scaled_value < -scaled_error; }
};

struct SignClassification {
  Verdict verdict = Verdict::positive;
  /// ac - d.
  double threshold_margin = 0.0;
  std::optional<Witness> witness;
};

/// Searches y = L_m/√x, x = 10, 20, 40, ... ≤ 10⁴ in normalised coordinates
/// and maps the first certified point back. Throws NotFound.
Witness negative_witness(const DiagParams& p, const Tolerance& tol = {});

/// Algebraic verdict; the witness search runs only when search_witness is set.
SignClassification classify_diag(const DiagParams& p, const Tolerance& tol = {},
                                 bool search_witness = true);

struct Window {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

/// Kernel signs of K_m on a node lattice over the window (ends included).
/// signs holds +1, -1, or 0 where |value| <= error.
struct SignMap {
  double m = 0.0;
  Window window;
  Eigen::Index nx = 0;
  Eigen::Index ny = 0;
  Eigen::VectorXd xs;
  Eigen::VectorXd ys;
  Eigen::MatrixXd values;  // rows index y, columns index x
  Eigen::MatrixXd errors;
  Eigen::MatrixXi signs;
  long evaluations = 0;
};

/// threads <= 0 selects one worker; rows are split by index so the result
/// does not depend on the worker count.
SignMap sign_map(double m, const Window& window, Eigen::Index nx, Eigen::Index ny,
                 const Tolerance& tol = {}, int threads = 1);

struct NonDiagCritical {
  double d_c = 0.0;
  double r = 0.0;
};

/// d_c = (√(ac) + b)², r = √(1 + b/√(ac)); requires |b| < √(ac).
NonDiagCritical nondiag_critical(double a, double b, double c);

/// u_xxyy - a u_xx - 2b u_xy - c u_yy + d u for u = exp(-r(√c x + √a y)),
/// r = √(1 + b/√(ac)).
double nondiag_residual(double a, double b, double c, double d, double x, double y);

}  // namespace en
