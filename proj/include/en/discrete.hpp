#pragma once

// Finite-difference oracle for the corner-constrained problem
//
//   minimise J_h(u) = Σ_cells h² (u_xy² + a u_x² + 2b u_x u_y + c u_y² + d u²)
//   subject to u(0,0) = 1,
//
// with zero Dirichlet data on the artificial far boundary.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <iosfwd>
#include <vector>

#include "en/symbols.hpp"

namespace en {

enum class Mask { quadrant, half_plane, cone };

const char* to_string(Mask mask);
Mask mask_from_string(const std::string& name);

/// Node lattice x = x_min + i h, y = j h with y in [0, L]. The quadrant and
/// cone use x in [0, L]; the half-plane uses x in [-L, L]. The cone keeps
/// cells whose centre satisfies y <= slope · x.
struct Grid {
  double L = 12.0;
  double h = 0.05;
  Mask mask = Mask::quadrant;
  double slope = 1.0;

  static Grid quadrant(double L, double h) { return {L, h, Mask::quadrant, 1.0}; }
  static Grid half_plane(double L, double h) { return {L, h, Mask::half_plane, 1.0}; }
  static Grid cone(double L, double h, double slope) { return {L, h, Mask::cone, slope}; }

  [[nodiscard]] Eigen::Index n() const;  // nodes per unit axis: floor(L/h) + 1
  [[nodiscard]] Eigen::Index nx() const;
  [[nodiscard]] Eigen::Index ny() const { return n(); }
  [[nodiscard]] double x_min() const { return mask == Mask::half_plane ? -L : 0.0; }
  [[nodiscard]] double x(Eigen::Index i) const { return x_min() + static_cast<double>(i) * h; }
  [[nodiscard]] double y(Eigen::Index j) const { return static_cast<double>(j) * h; }
  /// Column index of the corner (0, 0).
  [[nodiscard]] Eigen::Index corner_i() const { return mask == Mask::half_plane ? n() - 1 : 0; }
  [[nodiscard]] bool cell_inside(Eigen::Index i, Eigen::Index j) const;

  /// Throws DomainError on bad sizes or when the node cap is exceeded.
  void validate() const;
};

inline constexpr double kMaxGridNodes = 4e6;

struct Coefficients {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
  double d = 1.0;
};

/// The assembled form over the free nodes.
struct DiscreteForm {
  Grid grid;
  Coefficients coef;
  Eigen::SparseMatrix<double> A;
  /// Free-node index for node (i, j) at i + j·nx, or -1 if fixed at zero.
  std::vector<Eigen::Index> unknown_of;
  /// Node (i, j) of each free index.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> node_of;
  Eigen::Index corner = 0;
  /// ω_n h²: the d-term of J_h is d Σ weight_n u_n².
  Eigen::VectorXd mass_weight;

  [[nodiscard]] double energy(const Eigen::VectorXd& u) const { return u.dot(A * u); }
};

DiscreteForm assemble(const DiagParams& p, const Grid& g);
/// Enforces |b| < min{1, a, c, d}/2.
DiscreteForm assemble(const NonDiagParams& p, const Grid& g);

struct DiscreteSolution {
  Grid grid;
  /// Free-node values; the corner entry is exactly 1.
  Eigen::VectorXd u;
  /// Nodal field on the full lattice, rows index x, columns index y.
  Eigen::MatrixXd field;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;

  /// Bilinear interpolation of the nodal field; zero outside the lattice.
  [[nodiscard]] double value_at(double x, double y) const;
  [[nodiscard]] double node_value(Eigen::Index i, Eigen::Index j) const { return field(i, j); }
};

/// Riesz solve A k = e_corner, u = k/k_corner, J_h = 1/k_corner.
DiscreteSolution solve_riesz(const DiscreteForm& form);

struct NonnegativeOptions {
  int max_active_set_iterations = 200;
  long max_gradient_iterations = 100000;
  double gradient_tol = 1e-8;
};

/// Minimises J_h with u(corner) = 1 and u >= 0 by a primal-dual active set
/// method, falling back to projected gradient if the active set cycles.
DiscreteSolution solve_nonnegative(const DiscreteForm& form, const NonnegativeOptions& opt = {});

struct VarianceGap {
  double E_star = 0.0;
  double E_plus = 0.0;
  /// d Σ ω_n h² (u_*⁻)².
  double lower_bound = 0.0;
  /// J_h(u₊ - u_*), equal to E_plus - E_star by the Euler identity.
  double gap_energy = 0.0;
  double min_u_star = 0.0;

  [[nodiscard]] double gap() const { return E_plus - E_star; }
};

VarianceGap variance_gap(const DiagParams& p, const Grid& g);

struct CutoffEnergy {
  double gradient = 0.0;
  double mass = 0.0;

  [[nodiscard]] double total() const { return gradient + mass; }
};

/// Energy M ∫ x (a F'² + d F²) dx of the log cutoff F = 1 on [0, ε],
/// log(R/x)/log(R/ε) on [ε, R], 0 beyond.
CutoffEnergy cone_cutoff_energy(const DiagParams& p, double slope, double eps, double R);

struct HalfPlaneReport {
  double sup_error = 0.0;
  double y_probe = 1.0;
  double slope_right = 0.0;
  double slope_left = 0.0;
  double expected_slope = 0.0;
  double energy = 0.0;
  double expected_energy = 0.0;

  [[nodiscard]] double slope_jump() const { return slope_left - slope_right; }
};

/// Critical case on the half-plane: distance to e^{-√c|x| - √a y}, the
/// one-sided x-slopes at (0, y_probe), and the energy against 2√(ac).
HalfPlaneReport halfplane_check(const DiagParams& p, const Grid& g, double y_probe = 1.0);

/// CSV rows x,y,u for every stride-th node.
void write_csv(std::ostream& out, const DiscreteSolution& s, Eigen::Index stride = 1);

}  // namespace en
