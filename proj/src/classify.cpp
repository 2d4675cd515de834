#include "en/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "en/errors.hpp"
#include "en/kernel2d.hpp"
#include "en/profile.hpp"

namespace en {

namespace {

constexpr double kFirstX = 10.0;
constexpr double kLastX = 1e4;

// Eigen's LinSpaced returns the upper end for a single point; we want the lower.
Eigen::VectorXd lattice(Eigen::Index n, double lo, double hi) {
  if (n == 1) return Eigen::VectorXd::Constant(1, lo);
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

}  // namespace

const char* to_string(Verdict v) {
  return v == Verdict::positive ? "Positive" : "SignChanging";
}

Witness negative_witness(const DiagParams& p, const Tolerance& tol) {
  if (p.subcritical() || p.critical()) {
    throw DomainError("negative_witness: needs d > ac");
  }
  const Rescaling s = rescale(p);
  const LayerScale layer = LayerScale::from_m(s.m);
  for (double xs = kFirstX; xs <= kLastX; xs *= 2.0) {
    const double ys = layer.L_m / std::sqrt(xs);
    const ScaledEval k = eval_branchcut_scaled(s.m, xs, ys, tol);
    if (k.scaled < -k.scaled_error) {
      Witness w;
      std::tie(w.x, w.y) = s.unmap(xs, ys);
      w.scaled_value = s.prefactor * k.scaled;
      w.scaled_error = s.prefactor * k.scaled_error;
      w.log_scale = k.log_scale;
      w.value = w.scaled_value * std::exp(-w.log_scale);
      w.abs_error_estimate = w.scaled_error * std::exp(-w.log_scale);
      return w;
    }
  }
  std::ostringstream msg;
  msg << "negative_witness: no certified negative value for m = " << s.m << " up to x = "
      << kLastX;
  throw NotFound(msg.str());
}

SignClassification classify_diag(const DiagParams& p, const Tolerance& tol, bool search_witness) {
  SignClassification out;
  out.threshold_margin = p.margin();
  // The boundary case d = ac counts as positive even when rounding leaves
  // d a hair above ac.
  if (p.subcritical() || p.critical()) {
    out.verdict = Verdict::positive;
    return out;
  }
  out.verdict = Verdict::sign_changing;
  if (search_witness) out.witness = negative_witness(p, tol);
  return out;
}

SignMap sign_map(double m, const Window& window, Eigen::Index nx, Eigen::Index ny,
                 const Tolerance& tol, int threads) {
  if (!(m > 1.0)) throw DomainError("sign_map: need m > 1");
  if (nx < 1 || ny < 1) throw DomainError("sign_map: resolution must be positive");
  if (!(window.x_min >= 0.0 && window.y_min >= 0.0 && window.x_max >= window.x_min &&
        window.y_max >= window.y_min)) {
    throw DomainError("sign_map: window must lie in the closed quadrant");
  }
  SignMap map;
  map.m = m;
  map.window = window;
  map.nx = nx;
  map.ny = ny;
  map.xs = lattice(nx, window.x_min, window.x_max);
  map.ys = lattice(ny, window.y_min, window.y_max);
  map.values.resize(ny, nx);
  map.errors.resize(ny, nx);
  map.signs.resize(ny, nx);

  const DiagParams p(1.0, 1.0, m);
  std::vector<long> row_evaluations(static_cast<std::size_t>(ny), 0);
  auto fill_row = [&](Eigen::Index j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      const ScaledEval k = eval_scaled(p, map.xs[i], map.ys[j], tol);
      map.values(j, i) = k.value();
      map.errors(j, i) = k.error();
      map.signs(j, i) = std::abs(k.scaled) <= k.scaled_error ? 0 : (k.scaled > 0.0 ? 1 : -1);
      row_evaluations[static_cast<std::size_t>(j)] += k.evaluations;
    }
  };

  const int workers = std::clamp<int>(threads, 1, static_cast<int>(ny));
  if (workers == 1) {
    for (Eigen::Index j = 0; j < ny; ++j) fill_row(j);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (Eigen::Index j = w; j < ny; j += workers) fill_row(j);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  for (long e : row_evaluations) map.evaluations += e;
  return map;
}

NonDiagCritical nondiag_critical(double a, double b, double c) {
  if (!(a > 0.0 && c > 0.0) || !std::isfinite(b)) {
    throw DomainError("nondiag_critical: need a, c > 0");
  }
  const double root = std::sqrt(a * c);
  if (!(std::abs(b) < root)) throw DomainError("nondiag_critical: need |b| < sqrt(ac)");
  return {(root + b) * (root + b), std::sqrt(1.0 + b / root)};
}

double nondiag_residual(double a, double b, double c, double d, double x, double y) {
  const NonDiagCritical crit = nondiag_critical(a, b, c);
  const double kx = crit.r * std::sqrt(c);
  const double ky = crit.r * std::sqrt(a);
  const double u = std::exp(-kx * x - ky * y);
  const double u_xx = kx * kx * u;
  const double u_yy = ky * ky * u;
  const double u_xy = kx * ky * u;
  const double u_xxyy = kx * kx * ky * ky * u;
  return u_xxyy - a * u_xx - 2.0 * b * u_xy - c * u_yy + d * u;
}

}  // namespace en
