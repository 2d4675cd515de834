#include "en/discrete.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "en/errors.hpp"
#include "en/numerics.hpp"

namespace en {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Matrix4d = Eigen::Matrix4d;
using Vector4d = Eigen::Vector4d;

constexpr double kResidualTol = 1e-9;

// Local quadratic form of one cell on the nodes (0,0), (1,0), (0,1), (1,1).
Matrix4d cell_matrix(const Coefficients& k, double h) {
  const Vector4d mixed(1.0, -1.0, -1.0, 1.0);
  const Vector4d bottom(-1.0, 1.0, 0.0, 0.0);
  const Vector4d top(0.0, 0.0, -1.0, 1.0);
  const Vector4d left(-1.0, 0.0, 1.0, 0.0);
  const Vector4d right(0.0, -1.0, 0.0, 1.0);
  const Vector4d dx = bottom + top;
  const Vector4d dy = left + right;

  Matrix4d m = mixed * mixed.transpose() / (h * h);
  m += 0.5 * k.a * (bottom * bottom.transpose() + top * top.transpose());
  m += 0.5 * k.c * (left * left.transpose() + right * right.transpose());
  m += 0.25 * k.b * (dx * dy.transpose() + dy * dx.transpose());
  m += 0.25 * k.d * h * h * Matrix4d::Identity();
  return m;
}

DiscreteForm assemble_impl(const Coefficients& k, const Grid& g) {
  g.validate();
  const Eigen::Index nx = g.nx();
  const Eigen::Index ny = g.ny();
  auto node = [nx](Eigen::Index i, Eigen::Index j) { return i + j * nx; };
  auto fixed_boundary = [&](Eigen::Index i, Eigen::Index j) {
    if (i == nx - 1 || j == ny - 1) return true;
    return g.mask == Mask::half_plane && i == 0;
  };

  std::vector<int> touching(static_cast<std::size_t>(nx * ny), 0);
  for (Eigen::Index j = 0; j + 1 < ny; ++j) {
    for (Eigen::Index i = 0; i + 1 < nx; ++i) {
      if (!g.cell_inside(i, j)) continue;
      for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
        ++touching[static_cast<std::size_t>(node(i + di, j + dj))];
      }
    }
  }

  DiscreteForm form;
  form.grid = g;
  form.coef = k;
  form.unknown_of.assign(static_cast<std::size_t>(nx * ny), -1);
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      if (touching[static_cast<std::size_t>(node(i, j))] == 0 || fixed_boundary(i, j)) continue;
      form.unknown_of[static_cast<std::size_t>(node(i, j))] =
          static_cast<Eigen::Index>(form.node_of.size());
      form.node_of.emplace_back(i, j);
    }
  }
  const Eigen::Index corner = form.unknown_of[static_cast<std::size_t>(node(g.corner_i(), 0))];
  if (corner < 0) throw DomainError("assemble: the corner node is not free");
  form.corner = corner;

  const auto n_free = static_cast<Eigen::Index>(form.node_of.size());
  form.mass_weight.resize(n_free);
  for (Eigen::Index u = 0; u < n_free; ++u) {
    const auto [i, j] = form.node_of[static_cast<std::size_t>(u)];
    form.mass_weight[u] = 0.25 * g.h * g.h * touching[static_cast<std::size_t>(node(i, j))];
  }

  const Matrix4d local = cell_matrix(k, g.h);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(16 * nx * ny));
  for (Eigen::Index j = 0; j + 1 < ny; ++j) {
    for (Eigen::Index i = 0; i + 1 < nx; ++i) {
      if (!g.cell_inside(i, j)) continue;
      const std::array<Eigen::Index, 4> ids = {
          form.unknown_of[static_cast<std::size_t>(node(i, j))],
          form.unknown_of[static_cast<std::size_t>(node(i + 1, j))],
          form.unknown_of[static_cast<std::size_t>(node(i, j + 1))],
          form.unknown_of[static_cast<std::size_t>(node(i + 1, j + 1))]};
      for (int r = 0; r < 4; ++r) {
        if (ids[r] < 0) continue;
        for (int c = 0; c < 4; ++c) {
          if (ids[c] >= 0) triplets.emplace_back(ids[r], ids[c], local(r, c));
        }
      }
    }
  }
  form.A.resize(n_free, n_free);
  form.A.setFromTriplets(triplets.begin(), triplets.end());
  form.A.makeCompressed();
  return form;
}

DiscreteSolution package(const DiscreteForm& form, Eigen::VectorXd u) {
  DiscreteSolution s;
  s.grid = form.grid;
  s.field = Eigen::MatrixXd::Zero(form.grid.nx(), form.grid.ny());
  for (std::size_t k = 0; k < form.node_of.size(); ++k) {
    const auto [i, j] = form.node_of[k];
    s.field(i, j) = u[static_cast<Eigen::Index>(k)];
  }
  s.energy = form.energy(u);
  s.u = std::move(u);
  return s;
}

// Solves A u = 0 on the free rows with u fixed to `target` on `fixed` rows.
// The pattern of A is kept so the symbolic analysis can be reused.
class ConstrainedSolver {
 public:
  explicit ConstrainedSolver(const SparseMatrix& A) : A_(A), work_(A) {
    solver_.analyzePattern(work_);
  }

  Eigen::VectorXd solve(const std::vector<char>& fixed, const Eigen::VectorXd& target) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A_.rows());
    for (Eigen::Index col = 0; col < A_.outerSize(); ++col) {
      SparseMatrix::InnerIterator src(A_, col);
      SparseMatrix::InnerIterator dst(work_, col);
      for (; src; ++src, ++dst) {
        const Eigen::Index row = src.row();
        const bool fr = fixed[static_cast<std::size_t>(row)] != 0;
        const bool fc = fixed[static_cast<std::size_t>(col)] != 0;
        if (!fr && !fc) {
          dst.valueRef() = src.value();
        } else if (row == col) {
          dst.valueRef() = src.value();
          rhs[row] += src.value() * target[row];
        } else {
          dst.valueRef() = 0.0;
          if (!fr && fc) rhs[row] -= src.value() * target[col];
        }
      }
    }
    solver_.factorize(work_);
    if (solver_.info() != Eigen::Success) throw SolverError("sparse factorization failed");
    Eigen::VectorXd u = solver_.solve(rhs);
    if (solver_.info() != Eigen::Success) throw SolverError("sparse solve failed");
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      if (fixed[static_cast<std::size_t>(k)]) u[k] = target[k];
    }
    return u;
  }

 private:
  const SparseMatrix& A_;
  SparseMatrix work_;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
};

double power_norm(const SparseMatrix& A) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(A.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd w = A * v;
    const double next = w.norm();
    v = w / next;
    if (std::abs(next - lambda) <= 1e-6 * next) return next;
    lambda = next;
  }
  return lambda;
}

DiscreteSolution projected_gradient(const DiscreteForm& form, Eigen::VectorXd u,
                                    const NonnegativeOptions& opt) {
  const double norm = power_norm(form.A);
  const double step = 1.0 / (2.0 * norm);
  u = u.cwiseMax(0.0);
  u[form.corner] = 1.0;
  for (long it = 0; it < opt.max_gradient_iterations; ++it) {
    Eigen::VectorXd grad = 2.0 * (form.A * u);
    grad[form.corner] = 0.0;
    // Projected gradient: components pushing below zero at the bound vanish.
    Eigen::VectorXd pg = grad;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      if (u[k] <= 0.0 && grad[k] > 0.0) pg[k] = 0.0;
    }
    if (pg.norm() <= opt.gradient_tol * norm) {
      DiscreteSolution s = package(form, std::move(u));
      s.iterations = static_cast<int>(it);
      s.residual = pg.norm() / norm;
      return s;
    }
    u = (u - step * grad).cwiseMax(0.0);
    u[form.corner] = 1.0;
  }
  throw SolverError("solve_nonnegative: projected gradient hit its iteration cap");
}

constexpr Eigen::Index kCoarseStartNodes = 81;

// Contact set {u₊ = 0} of the same problem on the grid with step 2h, spread
// to the fine nodes; empty when the grids do not nest or the grid is small.
std::vector<char> coarse_contact_set(const DiscreteForm& form, const NonnegativeOptions& opt);

}  // namespace

const char* to_string(Mask mask) {
  switch (mask) {
    case Mask::quadrant: return "quadrant";
    case Mask::half_plane: return "halfplane";
    case Mask::cone: return "cone";
  }
  return "unknown";
}

Mask mask_from_string(const std::string& name) {
  for (Mask m : {Mask::quadrant, Mask::half_plane, Mask::cone}) {
    if (name == to_string(m)) return m;
  }
  throw DomainError("unknown mask '" + name + "'");
}

Eigen::Index Grid::n() const {
  return static_cast<Eigen::Index>(std::floor(L / h + 1e-9)) + 1;
}

Eigen::Index Grid::nx() const { return mask == Mask::half_plane ? 2 * n() - 1 : n(); }

bool Grid::cell_inside(Eigen::Index i, Eigen::Index j) const {
  if (mask != Mask::cone) return true;
  const double xc = x(i) + 0.5 * h;
  const double yc = y(j) + 0.5 * h;
  // The corner cell stays so the corner node always carries energy.
  return (i == 0 && j == 0) || yc <= slope * xc;
}

void Grid::validate() const {
  if (!(L > 0.0) || !(h > 0.0) || !std::isfinite(L) || !std::isfinite(h)) {
    throw DomainError("grid: need L > 0 and h > 0");
  }
  if (n() < 3) throw DomainError("grid: need at least three nodes per axis");
  if (static_cast<double>(nx()) * static_cast<double>(ny()) > kMaxGridNodes) {
    throw DomainError("grid: node count exceeds the 4e6 cap");
  }
  if (mask == Mask::cone && !(slope > 0.0)) throw DomainError("grid: cone slope must be > 0");
}

DiscreteForm assemble(const DiagParams& p, const Grid& g) {
  return assemble_impl({p.a(), 0.0, p.c(), p.d()}, g);
}

DiscreteForm assemble(const NonDiagParams& p, const Grid& g) {
  const double guard = 0.5 * std::min({1.0, p.a(), p.c(), p.d()});
  if (!(std::abs(p.b()) < guard)) {
    throw DomainError("assemble: |b| must stay below min{1, a, c, d}/2 = " +
                      std::to_string(guard));
  }
  return assemble_impl({p.a(), p.b(), p.c(), p.d()}, g);
}

double DiscreteSolution::value_at(double x, double y) const {
  const double fx = (x - grid.x_min()) / grid.h;
  const double fy = y / grid.h;
  if (fx < 0.0 || fy < 0.0) return 0.0;
  const auto i = static_cast<Eigen::Index>(std::floor(fx));
  const auto j = static_cast<Eigen::Index>(std::floor(fy));
  if (i >= field.rows() || j >= field.cols()) return 0.0;
  const double tx = fx - static_cast<double>(i);
  const double ty = fy - static_cast<double>(j);
  auto at = [this](Eigen::Index a, Eigen::Index b) {
    return a < field.rows() && b < field.cols() ? field(a, b) : 0.0;
  };
  return (1.0 - tx) * (1.0 - ty) * at(i, j) + tx * (1.0 - ty) * at(i + 1, j) +
         (1.0 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

DiscreteSolution solve_riesz(const DiscreteForm& form) {
  Eigen::SimplicialLDLT<SparseMatrix> solver(form.A);
  if (solver.info() != Eigen::Success) throw SolverError("solve_riesz: factorization failed");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(form.A.rows());
  e[form.corner] = 1.0;
  const Eigen::VectorXd k = solver.solve(e);
  const double k_corner = k[form.corner];
  if (!(k_corner > 0.0)) throw SolverError("solve_riesz: nonpositive corner value");
  Eigen::VectorXd u = k / k_corner;
  u[form.corner] = 1.0;

  DiscreteSolution s = package(form, std::move(u));
  // Euler identity A u = J_h e_corner.
  const Eigen::VectorXd r = form.A * s.u - s.energy * e;
  s.residual = r.norm() / s.energy;
  if (!(s.residual <= kResidualTol)) {
    throw SolverError("solve_riesz: residual " + std::to_string(s.residual) + " too large");
  }
  return s;
}

namespace {

std::vector<char> coarse_contact_set(const DiscreteForm& form, const NonnegativeOptions& opt) {
  const Grid& g = form.grid;
  if (g.n() < kCoarseStartNodes || (g.n() - 1) % 2 != 0) return {};
  Grid coarse = g;
  coarse.h = 2.0 * g.h;
  if (coarse.n() - 1 != (g.n() - 1) / 2) return {};
  const DiscreteForm cform = assemble_impl(form.coef, coarse);
  const DiscreteSolution csol = solve_nonnegative(cform, opt);

  auto coarse_zero = [&](Eigen::Index ci, Eigen::Index cj) {
    const Eigen::Index k = cform.unknown_of[static_cast<std::size_t>(ci + cj * coarse.nx())];
    return k < 0 || (k != cform.corner && csol.u[k] == 0.0);
  };
  std::vector<char> out(static_cast<std::size_t>(form.A.rows()), 0);
  for (std::size_t k = 0; k < form.node_of.size(); ++k) {
    const auto [i, j] = form.node_of[k];
    bool all = true;
    for (Eigen::Index ci : {i / 2, (i + 1) / 2}) {
      for (Eigen::Index cj : {j / 2, (j + 1) / 2}) all = all && coarse_zero(ci, cj);
    }
    out[k] = all ? 1 : 0;
  }
  return out;
}

}  // namespace

DiscreteSolution solve_nonnegative(const DiscreteForm& form, const NonnegativeOptions& opt) {
  const Eigen::Index n = form.A.rows();
  ConstrainedSolver solver(form.A);

  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd target = Eigen::VectorXd::Zero(n);
  fixed[static_cast<std::size_t>(form.corner)] = 1;
  target[form.corner] = 1.0;
  Eigen::VectorXd u;
  Eigen::VectorXd multiplier = Eigen::VectorXd::Zero(n);

  // The active set moves about one node per sweep, so fine grids start from
  // the contact set of the grid with twice the step.
  const std::vector<char> guess = coarse_contact_set(form, opt);
  if (guess.empty()) {
    u = solve_riesz(form).u;
  } else {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != form.corner) fixed[static_cast<std::size_t>(k)] = guess[static_cast<std::size_t>(k)];
    }
    u = solver.solve(fixed, target);
    const Eigen::VectorXd r = form.A * u;
    for (Eigen::Index k = 0; k < n; ++k) {
      multiplier[k] = fixed[static_cast<std::size_t>(k)] && k != form.corner ? r[k] : 0.0;
    }
    multiplier /= form.A.diagonal().maxCoeff();
  }

  for (int it = 1; it <= opt.max_active_set_iterations; ++it) {
    // Active where the complementarity function λ - u is positive.
    bool changed = false;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == form.corner) continue;
      const char active = multiplier[k] - u[k] > 0.0 ? 1 : 0;
      if (active != fixed[static_cast<std::size_t>(k)]) {
        fixed[static_cast<std::size_t>(k)] = active;
        changed = true;
      }
    }
    if (!changed && it > 1) {
      DiscreteSolution s = package(form, std::move(u));
      s.iterations = it - 1;
      const Eigen::VectorXd r = form.A * s.u;
      double worst = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == form.corner) continue;
        worst = std::max(worst, fixed[static_cast<std::size_t>(k)] ? -r[k] : std::abs(r[k]));
      }
      s.residual = worst / s.energy;
      return s;
    }
    u = solver.solve(fixed, target);
    const Eigen::VectorXd r = form.A * u;
    for (Eigen::Index k = 0; k < n; ++k) {
      multiplier[k] = fixed[static_cast<std::size_t>(k)] && k != form.corner ? r[k] : 0.0;
    }
    // Scale the dual so both halves of λ - u are comparable.
    multiplier /= form.A.diagonal().maxCoeff();
  }
  return projected_gradient(form, std::move(u), opt);
}

VarianceGap variance_gap(const DiagParams& p, const Grid& g) {
  const DiscreteForm form = assemble(p, g);
  const DiscreteSolution star = solve_riesz(form);
  const DiscreteSolution plus = solve_nonnegative(form);
  VarianceGap out;
  out.E_star = star.energy;
  out.E_plus = plus.energy;
  const Eigen::ArrayXd negative = (-star.u.array()).max(0.0);
  out.lower_bound = p.d() * (form.mass_weight.array() * negative.square()).sum();
  out.gap_energy = form.energy(plus.u - star.u);
  out.min_u_star = star.u.minCoeff();
  return out;
}

CutoffEnergy cone_cutoff_energy(const DiagParams& p, double slope, double eps, double R) {
  if (!(slope > 0.0)) throw DomainError("cone_cutoff_energy: need slope > 0");
  if (!(eps > 0.0 && R > eps)) throw DomainError("cone_cutoff_energy: need 0 < eps < R");
  const double log_ratio = std::log(R / eps);
  CutoffEnergy e;
  e.gradient = p.a() * slope / log_ratio;
  auto ramp = [R](double x) {
    const double l = std::log(R / x);
    return x * l * l;
  };
  Tolerance tol;
  tol.abs_tol = 1e-16;
  const double ramp_mass = integrate_adaptive(ramp, eps, R, tol).value / (log_ratio * log_ratio);
  e.mass = p.d() * slope * (0.5 * eps * eps + ramp_mass);
  return e;
}

HalfPlaneReport halfplane_check(const DiagParams& p, const Grid& g, double y_probe) {
  if (!p.critical()) throw DomainError("halfplane_check: needs d = ac");
  if (g.mask != Mask::half_plane) throw DomainError("halfplane_check: needs a half-plane grid");
  const DiscreteSolution s = solve_riesz(assemble(p, g));
  const double rc = std::sqrt(p.c());
  const double ra = std::sqrt(p.a());

  HalfPlaneReport rep;
  for (Eigen::Index j = 0; j < g.ny(); ++j) {
    for (Eigen::Index i = 0; i < g.nx(); ++i) {
      const double exact = std::exp(-rc * std::abs(g.x(i)) - ra * g.y(j));
      rep.sup_error = std::max(rep.sup_error, std::abs(s.field(i, j) - exact));
    }
  }
  const auto j = static_cast<Eigen::Index>(std::lround(y_probe / g.h));
  const Eigen::Index i0 = g.corner_i();
  rep.y_probe = g.y(j);
  rep.slope_right = (s.field(i0 + 1, j) - s.field(i0, j)) / g.h;
  rep.slope_left = (s.field(i0, j) - s.field(i0 - 1, j)) / g.h;
  rep.expected_slope = rc * std::exp(-ra * rep.y_probe);
  rep.energy = s.energy;
  rep.expected_energy = 2.0 * std::sqrt(p.a() * p.c());
  return rep;
}

void write_csv(std::ostream& out, const DiscreteSolution& s, Eigen::Index stride) {
  if (stride < 1) throw DomainError("write_csv: stride must be >= 1");
  out << "x,y,u\n";
  char line[96];
  for (Eigen::Index j = 0; j < s.field.cols(); j += stride) {
    for (Eigen::Index i = 0; i < s.field.rows(); i += stride) {
      std::snprintf(line, sizeof line, "%.10g,%.10g,%.12g\n", s.grid.x(i), s.grid.y(j),
                    s.field(i, j));
      out << line;
    }
  }
}

}  // namespace en
