#include "en/evolve.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "en/errors.hpp"

namespace en {

namespace {

constexpr double kModeFloor = 1e-14;
constexpr double kRatioSlack = 1e-12;

bool power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

double frequency(Eigen::Index k, Eigen::Index n, double L) {
  const Eigen::Index signed_k = k <= n / 2 ? k : k - n;
  return std::numbers::pi * static_cast<double>(signed_k) / L;
}

std::vector<std::complex<double>> forward(const EvolutionState& s) {
  Eigen::FFT<double> fft;
  std::vector<double> in(s.samples.data(), s.samples.data() + s.samples.size());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  return out;
}

}  // namespace

EvolutionState EvolutionState::sample(const std::function<double(double)>& f, double L,
                                      Eigen::Index n) {
  EvolutionState s;
  s.L = L;
  s.samples.resize(n);
  s.validate();
  for (Eigen::Index k = 0; k < n; ++k) s.samples[k] = f(s.x(k));
  return s;
}

void EvolutionState::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("evolution state: need L > 0");
  if (!power_of_two(samples.size()) || samples.size() < 2) {
    throw DomainError("evolution state: sample count must be a power of two >= 2");
  }
  if (!(t >= 0.0)) throw DomainError("evolution state: need t >= 0");
}

MultiplierBounds multiplier_bounds(const DiagParams& p) {
  const double at_zero = std::sqrt(p.d() / p.c());
  const double at_infinity = std::sqrt(p.a());
  return {std::min(at_zero, at_infinity), std::max(at_zero, at_infinity)};
}

Multiplier decaying_multiplier(const DiagParams& p) {
  return [p](double xi) { return lambda_real(p, xi); };
}

EvolutionState evolve_step(const EvolutionState& s, const DiagParams& p, double dt) {
  return evolve_step(s, decaying_multiplier(p), dt);
}

EvolutionState evolve_step(const EvolutionState& s, const Multiplier& lambda, double dt) {
  s.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("evolve_step: need dt > 0");
  const Eigen::Index n = s.size();
  std::vector<std::complex<double>> modes = forward(s);
  for (Eigen::Index k = 0; k < n; ++k) {
    // |ξ| keeps the multiplier even, so conjugate symmetry survives.
    modes[static_cast<std::size_t>(k)] *= std::exp(-dt * lambda(std::abs(frequency(k, n, s.L))));
  }
  Eigen::FFT<double> fft;
  std::vector<double> back;
  fft.inv(back, modes);
  EvolutionState out = s;
  out.samples = Eigen::Map<const Eigen::VectorXd>(back.data(), n);
  out.t = s.t + dt;
  return out;
}

Spectrum spectrum(const EvolutionState& s) {
  s.validate();
  const Eigen::Index n = s.size();
  const std::vector<std::complex<double>> modes = forward(s);
  Spectrum out;
  out.xi.resize(n);
  out.coeff.resize(n);
  out.dxi = std::numbers::pi / s.L;
  const double scale = s.dx() / std::sqrt(2.0 * std::numbers::pi);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.xi[k] = frequency(k, n, s.L);
    out.coeff[k] = scale * modes[static_cast<std::size_t>(k)];
  }
  return out;
}

double sobolev_norm(const EvolutionState& s, double order) {
  const Spectrum sp = spectrum(s);
  const Eigen::ArrayXd weight = (1.0 + sp.xi.array().square()).pow(order);
  return std::sqrt((weight * sp.coeff.array().abs2()).sum() * sp.dxi);
}

double mode_energy_ratio(const EvolutionState& s, double xi_cut) {
  const Spectrum sp = spectrum(s);
  const Eigen::ArrayXd power = sp.coeff.array().abs2();
  const auto high = (sp.xi.array().abs() > xi_cut).cast<double>();
  const double high_energy = (power * high).sum();
  const double low_energy = (power * (1.0 - high)).sum();
  if (!(low_energy > 0.0)) throw DomainError("mode_energy_ratio: no energy below the cut");
  return high_energy / low_energy;
}

bool NoSmoothingReport::passed() const {
  return modes_within_bounds &&
         std::all_of(norms.begin(), norms.end(), [](const SobolevBound& b) { return b.holds(); });
}

NoSmoothingReport no_smoothing_check(const EvolutionState& initial, const DiagParams& p, double t,
                                     const std::vector<double>& orders,
                                     const Multiplier& lambda) {
  if (!(t > 0.0)) throw DomainError("no_smoothing_check: need t > 0");
  NoSmoothingReport rep;
  rep.bounds = multiplier_bounds(p);
  rep.t = t;
  const EvolutionState later = evolve_step(initial, lambda ? lambda : decaying_multiplier(p), t);
  const double slow = std::exp(-rep.bounds.m_low * t);
  const double fast = std::exp(-rep.bounds.m_high * t);

  for (double s : orders) {
    SobolevBound b;
    b.order = s;
    b.initial = sobolev_norm(initial, s);
    b.final = sobolev_norm(later, s);
    b.lower = fast * b.initial;
    b.upper = slow * b.initial;
    rep.norms.push_back(b);
  }

  const Spectrum before = spectrum(initial);
  const Spectrum after = spectrum(later);
  const double top = before.coeff.cwiseAbs().maxCoeff();
  rep.min_mode_ratio = std::numeric_limits<double>::infinity();
  rep.max_mode_ratio = 0.0;
  for (Eigen::Index k = 0; k < before.coeff.size(); ++k) {
    const double a0 = std::abs(before.coeff[k]);
    if (a0 <= kModeFloor * top) continue;
    const double ratio = std::abs(after.coeff[k]) / a0;
    rep.min_mode_ratio = std::min(rep.min_mode_ratio, ratio);
    rep.max_mode_ratio = std::max(rep.max_mode_ratio, ratio);
  }
  // Modes near the floor carry round-off of order 1e-16·top/|û_0,k|.
  rep.modes_within_bounds = rep.min_mode_ratio >= fast * (1.0 - 1e-6) - kRatioSlack &&
                            rep.max_mode_ratio <= slow * (1.0 + 1e-6) + kRatioSlack;
  return rep;
}

std::complex<double> multiplier_nondiag(const NonDiagParams& p, double xi) {
  const double xi2 = xi * xi;
  const double lo = xi2 + p.c();
  const double radicand = lo * (p.a() * xi2 + p.d()) - p.b() * p.b() * xi2;
  return {std::sqrt(radicand) / lo, p.b() * xi / lo};
}

void write_csv(std::ostream& out, const EvolutionState& s) {
  out << "x,u\n";
  char line[64];
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    std::snprintf(line, sizeof line, "%.10g,%.12g\n", s.x(k), s.samples[k]);
    out << line;
  }
}

}  // namespace en
