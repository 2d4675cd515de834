#pragma once

// Decaying-branch evolution ∂_t û + λ(ξ) û = 0 on a periodic box [-L, L).

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "en/symbols.hpp"

namespace en {

struct EvolutionState {
  /// u at x_k = -L + k Δx, k = 0..N-1, N a power of two.
  Eigen::VectorXd samples;
  double L = 1.0;
  double t = 0.0;

  [[nodiscard]] Eigen::Index size() const { return samples.size(); }
  [[nodiscard]] double dx() const { return 2.0 * L / static_cast<double>(samples.size()); }
  [[nodiscard]] double x(Eigen::Index k) const { return -L + static_cast<double>(k) * dx(); }

  static EvolutionState sample(const std::function<double(double)>& f, double L, Eigen::Index n);
  void validate() const;
};

struct MultiplierBounds {
  double m_low = 0.0;
  double m_high = 0.0;
};

MultiplierBounds multiplier_bounds(const DiagParams& p);

/// Symbol of the decaying branch as a function of the frequency.
using Multiplier = std::function<double(double)>;

Multiplier decaying_multiplier(const DiagParams& p);

EvolutionState evolve_step(const EvolutionState& s, const DiagParams& p, double dt);
EvolutionState evolve_step(const EvolutionState& s, const Multiplier& lambda, double dt);

/// Unitary-normalised coefficients û_k = Δx · FFT_k / √(2π) at ξ_k = πk/L
/// (k taken in (-N/2, N/2]).
struct Spectrum {
  Eigen::VectorXd xi;
  Eigen::VectorXcd coeff;
  double dxi = 0.0;
};

Spectrum spectrum(const EvolutionState& s);

/// (Σ (1 + ξ_k²)^s |û_k|² Δξ)^{1/2}.
double sobolev_norm(const EvolutionState& s, double order);

/// Σ_{|ξ|>cut} |û|² / Σ_{|ξ|<=cut} |û|².
double mode_energy_ratio(const EvolutionState& s, double xi_cut);

struct SobolevBound {
  double order = 0.0;
  double initial = 0.0;
  double final = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] bool holds(double slack = 1e-12) const {
    return final >= lower * (1.0 - slack) && final <= upper * (1.0 + slack);
  }
};

struct NoSmoothingReport {
  MultiplierBounds bounds;
  double t = 0.0;
  std::vector<SobolevBound> norms;
  /// Extreme per-mode ratios |û_t,k| / |û_0,k| over modes above the floor.
  double min_mode_ratio = 0.0;
  double max_mode_ratio = 0.0;
  bool modes_within_bounds = false;

  [[nodiscard]] bool passed() const;
};

/// Evolves to time t in one step (the semigroup is exact) and checks the
/// two-sided H^s bounds and the per-mode ratios.
NoSmoothingReport no_smoothing_check(const EvolutionState& initial, const DiagParams& p, double t,
                                     const std::vector<double>& orders,
                                     const Multiplier& lambda = {});

/// (√((ξ²+c)(aξ²+d) - b²ξ²) + i b ξ)/(ξ² + c).
std::complex<double> multiplier_nondiag(const NonDiagParams& p, double xi);

/// CSV rows x,u.
void write_csv(std::ostream& out, const EvolutionState& s);

}  // namespace en
