#include "en/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "en/errors.hpp"

namespace en {

double Tolerance::target(double value) const {
  return std::max(abs_tol, rel_tol * std::abs(value));
}

Tolerance Tolerance::scaled(double factor) const {
  return {abs_tol * factor, rel_tol * factor, max_evaluations};
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod 21-point abscissae; odd indices are the embedded 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067075260, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const RealFunction& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw NonFiniteIntegrand("integrand is not finite at x = " + std::to_string(x));
  }
  return v;
}

Panel gauss_kronrod(const RealFunction& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = checked(f, center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  double resabs = std::abs(kronrod);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(f, center - dx);
    const double f2 = checked(f, center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  Panel p{lo, hi, kronrod * half, 0.0};
  const double roundoff = 50.0 * kEps * resabs * std::abs(half);
  p.error = std::max(std::abs((kronrod - gauss) * half), roundoff);
  return p;
}

constexpr long kPanelEvaluations = 21;

}  // namespace

QuadResult integrate_adaptive(const RealFunction& f, double lo, double hi,
                              const Tolerance& tol) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("integrate_adaptive: need finite lo < hi");
  }
  std::priority_queue<Panel> queue;
  QuadResult result;
  double settled_value = 0.0;  // panels too narrow to split further
  double settled_error = 0.0;

  Panel first = gauss_kronrod(f, lo, hi);
  result.evaluations = kPanelEvaluations;
  double total = first.value;
  double total_error = first.error;
  queue.push(first);

  while (!queue.empty() && total_error > tol.target(total)) {
    if (result.evaluations + 2 * kPanelEvaluations > tol.max_evaluations) {
      throw BudgetExceeded("integrate_adaptive: evaluation budget exhausted, error estimate " +
                           std::to_string(total_error));
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double min_width = 64.0 * kEps * std::max(std::abs(worst.lo), std::abs(worst.hi));
    if (worst.hi - worst.lo < min_width || mid <= worst.lo || mid >= worst.hi) {
      // The worst panel is at round-off width; no split can improve the total.
      settled_value += worst.value;
      settled_error += worst.error;
      break;
    }
    Panel left = gauss_kronrod(f, worst.lo, mid);
    Panel right = gauss_kronrod(f, mid, worst.hi);
    result.evaluations += 2 * kPanelEvaluations;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  double value = settled_value;
  double error = settled_error;
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  result.value = value;
  result.abs_error_estimate = error;
  return result;
}

namespace {

QuadResult semiinfinite_exponential(const RealFunction& f, double rate, const Tolerance& tol,
                                    double lo) {
  if (!(rate > 0.0)) throw DomainError("exponential decay hint needs a positive rate");
  QuadResult total;
  double window = 8.0 / rate;
  double a = lo;
  const double give_up = lo + 1e8 / rate;
  while (true) {
    const double b = a + window;
    total += integrate_adaptive(f, a, b, tol);
    a = b;

    std::array<double, 5> samples{};
    for (std::size_t k = 0; k < samples.size(); ++k) {
      samples[k] = std::abs(checked(f, b + 0.5 * static_cast<double>(k) / rate));
    }
    total.evaluations += static_cast<long>(samples.size());
    const double head = std::max({samples[0], samples[1], samples[2]});
    const double tail = std::max(samples[3], samples[4]);
    const double bound = head / rate;
    const bool decaying = tail <= head;
    if (decaying && bound <= 0.5 * tol.target(total.value)) {
      total.abs_error_estimate += bound;
      return total;
    }
    if (b > give_up) {
      throw TailBoundUnavailable("integrate_semiinfinite: integrand does not decay at the declared "
                                 "exponential rate");
    }
    window *= 2.0;
    if (total.evaluations > tol.max_evaluations) {
      throw BudgetExceeded("integrate_semiinfinite: evaluation budget exhausted");
    }
  }
}

QuadResult semiinfinite_algebraic(const RealFunction& f, double power, const Tolerance& tol,
                                  double lo) {
  if (!(power > 1.0)) throw DomainError("algebraic decay hint needs power > 1");
  const double near = std::abs(checked(f, lo + 1e2)) * std::pow(1e2, power);
  const double far = std::abs(checked(f, lo + 1e4)) * std::pow(1e4, power);
  if (far > 1e3 * near + std::numeric_limits<double>::min()) {
    throw TailBoundUnavailable("integrate_semiinfinite: integrand decays slower than x^-" +
                               std::to_string(power));
  }
  auto mapped = [&f, lo](double t) {
    const double s = 1.0 - t;
    const double x = lo + t / s;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (s * s);
  };
  QuadResult r = integrate_adaptive(mapped, 0.0, 1.0, tol);
  r.evaluations += 2;
  return r;
}

struct Extrapolation {
  double value = 0.0;
  double error = std::numeric_limits<double>::infinity();
};

// Wynn's epsilon algorithm over the given partial sums; returns the last
// even-column diagonal entry with the spread against its neighbour.
Extrapolation wynn_epsilon(std::span<const double> sums) {
  Extrapolation best{sums.back(), std::numeric_limits<double>::infinity()};
  if (sums.size() >= 2) best.error = std::abs(sums[sums.size() - 1] - sums[sums.size() - 2]);
  std::vector<double> previous(sums.size() + 1, 0.0);
  std::vector<double> current(sums.begin(), sums.end());
  for (int column = 1; current.size() >= 2; ++column) {
    std::vector<double> next(current.size() - 1);
    for (std::size_t j = 0; j + 1 < current.size(); ++j) {
      const double diff = current[j + 1] - current[j];
      if (diff == 0.0) return {current[j + 1], 0.0};
      next[j] = previous[j + 1] + 1.0 / diff;
    }
    if (column % 2 == 0 && next.size() >= 2) {
      const double candidate = next.back();
      const double spread = std::abs(next.back() - next[next.size() - 2]);
      if (std::isfinite(candidate) && spread < best.error) best = {candidate, spread};
    }
    previous = std::move(current);
    current = std::move(next);
  }
  return best;
}

}  // namespace

QuadResult integrate_semiinfinite(const RealFunction& f, DecayHint hint, const Tolerance& tol,
                                  double lo) {
  switch (hint.kind) {
    case DecayHint::Kind::exponential:
      return semiinfinite_exponential(f, hint.parameter, tol, lo);
    case DecayHint::Kind::algebraic:
      return semiinfinite_algebraic(f, hint.parameter, tol, lo);
  }
  throw DomainError("unknown decay hint");
}

QuadResult integrate_cosine(const RealFunction& g, double omega, double lo, double decay_power,
                            const Tolerance& tol) {
  omega = std::abs(omega);
  if (omega == 0.0) {
    return integrate_semiinfinite(g, DecayHint::algebraic(decay_power), tol, lo);
  }
  auto integrand = [&g, omega](double t) {
    const double v = g(t);
    return v == 0.0 ? 0.0 : v * std::cos(omega * t);
  };
  const double cycle = (2.0 * std::floor(omega) + 1.0) * std::numbers::pi / omega;
  const Tolerance per_cycle = tol.scaled(0.1);

  constexpr int kMaxCycles = 400;
  constexpr std::size_t kWindow = 40;
  std::vector<double> sums;
  QuadResult total;
  double quad_error = 0.0;
  Extrapolation previous;
  Extrapolation best;
  double a = lo;
  for (int k = 0; k < kMaxCycles; ++k) {
    const QuadResult piece = integrate_adaptive(integrand, a, a + cycle, per_cycle);
    a += cycle;
    total.evaluations += piece.evaluations;
    quad_error += piece.abs_error_estimate;
    sums.push_back((sums.empty() ? 0.0 : sums.back()) + piece.value);
    if (total.evaluations > tol.max_evaluations) {
      throw BudgetExceeded("integrate_cosine: evaluation budget exhausted");
    }

    const std::size_t start = sums.size() > kWindow ? sums.size() - kWindow : 0;
    Extrapolation current = wynn_epsilon(std::span<const double>(sums).subspan(start));
    if (k >= 1) current.error = std::max(current.error, std::abs(current.value - previous.value));
    // Contributions already below round-off: the plain sum has converged.
    if (k >= 2 && std::abs(piece.value) <= kEps * std::abs(sums.back()) &&
        std::abs(sums[sums.size() - 2] - sums[sums.size() - 3]) <= kEps * std::abs(sums.back())) {
      current = {sums.back(), 4.0 * kEps * std::abs(sums.back())};
    }
    if (current.error < best.error || k == 0) best = current;
    previous = current;
    if (k >= 3 && best.error + quad_error <= tol.target(best.value)) break;
  }
  if (!(best.error + quad_error <= 1e3 * tol.target(best.value))) {
    throw BudgetExceeded("integrate_cosine: extrapolation did not converge, error estimate " +
                         std::to_string(best.error + quad_error));
  }
  total.value = best.value;
  total.abs_error_estimate = best.error + quad_error;
  return total;
}

double poisson_cosine(double Lambda, double y) {
  if (!(Lambda > 0.0)) throw DomainError("poisson_cosine: Lambda must be positive");
  if (y < 0.0) throw DomainError("poisson_cosine: y must be nonnegative");
  return std::numbers::pi / (2.0 * Lambda) * std::exp(-Lambda * y);
}

double gaussian_cosine(double u, double x) {
  if (!(u > 0.0)) throw DomainError("gaussian_cosine: u must be positive");
  return std::sqrt(std::numbers::pi) / (2.0 * std::sqrt(u)) * std::exp(-x * x / (4.0 * u));
}

namespace {

// a_k = Π_{j<=k} (2j-1)^2 / (k! 8^k), the Hankel coefficients for order zero.
template <typename Term>
void hankel_terms(double z, int max_terms, Term&& on_term) {
  double a = 1.0;
  double zk = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_terms; ++k) {
    const double term = a / zk;
    if (term > last) break;
    on_term(k, term);
    if (term < 1e-18) break;
    last = term;
    const double odd = 2.0 * k + 1.0;
    a *= odd * odd / (8.0 * (k + 1.0));
    zk *= z;
  }
}

double j0_series(double z) {
  const double q = -0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller backward recurrence normalised by J0 + 2 Σ J_{2k} = 1.
double j0_miller(double z) {
  int start = static_cast<int>(z + 40.0);
  if (start % 2 == 1) ++start;
  double next = 0.0;
  double current = 1e-30;
  double norm = 0.0;
  double j0 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double previous = 2.0 * k / z * current - next;
    next = current;
    current = previous;  // J_{k-1}
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * current;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
    }
  }
  j0 = current;
  norm += j0;
  return j0 / norm;
}

double j0_asymptotic(double z) {
  double p = 0.0;
  double q = 0.0;
  hankel_terms(z, 60, [&](int k, double term) {
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
  });
  const double chi = z - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double z) {
  if (z < 0.0 || std::isnan(z)) throw DomainError("bessel_j0: z must be nonnegative");
  if (z <= 4.0) return j0_series(z);
  if (z < 30.0) return j0_miller(z);
  return j0_asymptotic(z);
}

double bessel_i0_scaled(double z) {
  if (z < 0.0 || std::isnan(z)) throw DomainError("bessel_i0_scaled: z must be nonnegative");
  if (z <= 30.0) {
    const double q = 0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-z);
  }
  double sum = 0.0;
  hankel_terms(z, 80, [&](int, double term) { sum += term; });
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

double phi_n(int n, double z) {
  if (n < 1) throw DomainError("phi_n: n must be >= 1");
  if (z < 0.0) throw DomainError("phi_n: z must be nonnegative");
  const double lp = log_phi_n(n, z);
  if (lp > std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("phi_n: value exceeds the double range; use log_phi_n");
  }
  if (lp < 30.0) {
    // Direct summation is exact enough and avoids exp(log()) round-off.
    double term = 1.0;
    double sum = 1.0;
    const double peak = std::pow(z, 1.0 / n);
    for (int k = 1; k < 100000; ++k) {
      term *= z / std::pow(static_cast<double>(k), n);
      sum += term;
      if (k > peak && term < 1e-17 * sum) break;
    }
    return sum;
  }
  return std::exp(lp);
}

double log_phi_n(int n, double z) {
  if (n < 1) throw DomainError("log_phi_n: n must be >= 1");
  if (z < 0.0) throw DomainError("log_phi_n: z must be nonnegative");
  if (z == 0.0) return 0.0;
  const double log_z = std::log(z);
  auto log_term = [&](double k) { return k * log_z - n * std::lgamma(k + 1.0); };
  // The terms peak near k = z^{1/n}.
  const double kstar = std::floor(std::pow(z, 1.0 / n));
  double peak = log_term(kstar);
  const double up = log_term(kstar + 1.0);
  double kmax = kstar;
  if (up > peak) {
    peak = up;
    kmax = kstar + 1.0;
  }
  double sum = 1.0;
  for (double k = kmax + 1.0;; k += 1.0) {
    const double r = std::exp(log_term(k) - peak);
    sum += r;
    if (r < 1e-18 * sum) break;
  }
  for (double k = kmax - 1.0; k >= 0.0; k -= 1.0) {
    const double r = std::exp(log_term(k) - peak);
    sum += r;
    if (r < 1e-18 * sum) break;
  }
  return peak + std::log(sum);
}

}  // namespace en
