#pragma once

// Damped-Newton finite-difference solver for det D^2u = (a + b*y)^alpha on a
// rectangle with Dirichlet data on all four sides.
//
// Discretization: standard central differences,
//   F(u) = Dxx(u)*Dyy(u) - Dxy(u)^2 - (a + b*y)^alpha = 0  at interior nodes,
// which is O(h^2) consistent and exact on quadratics. The Newton
// linearization is the cofactor-weighted operator
//   F'(u) w = Dyy(u)*Dxx(w) + Dxx(u)*Dyy(w) - 2*Dxy(u)*Dxy(w),
// assembled as a sparse 9-point matrix (boundary couplings dropped: the
// boundary ring is fixed data) and solved directly with SparseLU. Steps are
// backtracked by halving until the residual sup-norm decreases; running out
// of halvings marks the run diverged rather than looping.
//
// The initial guess matters: Newton on the determinant operator has spurious
// non-convex roots, and a plain scaled quadratic start can fall into their
// basin on degenerate right-hand sides. The default `boundary_blend` start
// (transfinite blend of the four boundary edges) stays close to the convex
// solution; `quadratic` is kept as an alternative.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "degma/core.hpp"

namespace degma {

enum class solver_init { quadratic, boundary_blend };

struct solver_config {
  grid_spec grid;
  equation_params params;
  std::function<double(double, double)> boundary;
  double newton_tol = 1e-10;
  int max_iters = 50;
  double damping = 1.0;
  solver_init init = solver_init::boundary_blend;

  solver_config(grid_spec grid_, equation_params params_,
                std::function<double(double, double)> boundary_)
      : grid(grid_), params(params_), boundary(std::move(boundary_)) {
    if (!boundary) throw std::invalid_argument("solver_config: boundary function required");
  }

  void validate() const {
    if (!(newton_tol > 0.0)) throw std::invalid_argument("solver_config: newton_tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("solver_config: max_iters must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0))
      throw std::invalid_argument("solver_config: damping must be in (0, 1]");
  }
};

struct solve_report {
  scalar_field solution;
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  long convexity_violations = 0;
  std::vector<double> residual_history;
};

/// Count of interior nodes where the discrete Hessian fails convexity
/// (uxx < -tol or det < -tol, tol = 1e-10*(1 + sup|u|)).
inline long convexity_audit(const scalar_field& u) {
  const grid_spec& s = u.spec();
  const double hx = s.hx(), hy = s.hy();
  const double tol = 1e-10 * (1.0 + u.sup_norm());
  long count = 0;
  for (int j = 1; j < s.ny - 1; ++j) {
    for (int i = 1; i < s.nx - 1; ++i) {
      const double uxx = detail::d2x(u, i, j, hx);
      const double uyy = detail::d2y(u, i, j, hy);
      const double uxy = detail::dxy(u, i, j, hx, hy);
      if (uxx < -tol || uxx * uyy - uxy * uxy < -tol) ++count;
    }
  }
  return count;
}

namespace detail {

// Interior residual F(u) into `F`; returns sup-norm. `u` is the full field
// in row-major (y-outer) layout.
inline double newton_residual(const std::vector<double>& u, const grid_spec& s,
                              const std::vector<double>& rhs, std::vector<double>& F) {
  const int nx = s.nx, ny = s.ny;
  const double ihx2 = 1.0 / (s.hx() * s.hx());
  const double ihy2 = 1.0 / (s.hy() * s.hy());
  const double ixy = 1.0 / (4.0 * s.hx() * s.hy());
  double sup = 0.0;
  for (int j = 1; j < ny - 1; ++j) {
    for (int i = 1; i < nx - 1; ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * nx + i;
      const double dxx = (u[c - 1] - 2.0 * u[c] + u[c + 1]) * ihx2;
      const double dyy = (u[c - nx] - 2.0 * u[c] + u[c + nx]) * ihy2;
      const double dxy = (u[c + nx + 1] - u[c + nx - 1] - u[c - nx + 1] + u[c - nx - 1]) * ixy;
      const std::size_t k = static_cast<std::size_t>(j - 1) * (nx - 2) + (i - 1);
      F[k] = dxx * dyy - dxy * dxy - rhs[k];
      sup = std::max(sup, std::abs(F[k]));
    }
  }
  return sup;
}

inline std::vector<double> initial_guess(const solver_config& cfg) {
  const grid_spec& s = cfg.grid;
  std::vector<double> u(s.size());
  auto B = cfg.boundary;
  if (cfg.init == solver_init::quadratic) {
    // Fit s0*q + c0, q = (x^2 + y^2)/2, to the four boundary corners by
    // least squares; fall back to unit scale when the corners are level.
    double qc[4] = {0.5 * (s.x_min * s.x_min + s.y_min * s.y_min),
                    0.5 * (s.x_max * s.x_max + s.y_min * s.y_min),
                    0.5 * (s.x_min * s.x_min + s.y_max * s.y_max),
                    0.5 * (s.x_max * s.x_max + s.y_max * s.y_max)};
    double bc[4] = {B(s.x_min, s.y_min), B(s.x_max, s.y_min), B(s.x_min, s.y_max),
                    B(s.x_max, s.y_max)};
    double mq = (qc[0] + qc[1] + qc[2] + qc[3]) / 4.0;
    double mb = (bc[0] + bc[1] + bc[2] + bc[3]) / 4.0;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 4; ++k) {
      num += (qc[k] - mq) * (bc[k] - mb);
      den += (qc[k] - mq) * (qc[k] - mq);
    }
    const double s0 = (den > 1e-14 * (1.0 + mq * mq)) ? num / den : 1.0;
    const double c0 = mb - s0 * mq;
    for (int j = 0; j < s.ny; ++j)
      for (int i = 0; i < s.nx; ++i)
        u[static_cast<std::size_t>(j) * s.nx + i] =
            s0 * 0.5 * (s.x(i) * s.x(i) + s.y(j) * s.y(j)) + c0;
  } else {
    // Transfinite (Coons) blend of the four edges: matches the boundary
    // exactly and inherits its convexity pattern.
    for (int j = 0; j < s.ny; ++j) {
      const double y = s.y(j);
      const double ty = (y - s.y_min) / (s.y_max - s.y_min);
      for (int i = 0; i < s.nx; ++i) {
        const double x = s.x(i);
        const double tx = (x - s.x_min) / (s.x_max - s.x_min);
        const double val = (1.0 - ty) * B(x, s.y_min) + ty * B(x, s.y_max) +
                           (1.0 - tx) * B(s.x_min, y) + tx * B(s.x_max, y) -
                           ((1.0 - tx) * (1.0 - ty) * B(s.x_min, s.y_min) +
                            tx * (1.0 - ty) * B(s.x_max, s.y_min) +
                            (1.0 - tx) * ty * B(s.x_min, s.y_max) +
                            tx * ty * B(s.x_max, s.y_max));
        u[static_cast<std::size_t>(j) * s.nx + i] = val;
      }
    }
  }
  // Overwrite the boundary ring with the exact data: the blend reproduces it
  // only up to rounding, and the Dirichlet ring is held fixed afterwards.
  for (int i = 0; i < s.nx; ++i) {
    u[i] = B(s.x(i), s.y_min);
    u[static_cast<std::size_t>(s.ny - 1) * s.nx + i] = B(s.x(i), s.y_max);
  }
  for (int j = 0; j < s.ny; ++j) {
    u[static_cast<std::size_t>(j) * s.nx] = B(s.x_min, s.y(j));
    u[static_cast<std::size_t>(j) * s.nx + (s.nx - 1)] = B(s.x_max, s.y(j));
  }
  return u;
}

}  // namespace detail

inline solve_report solve_dirichlet(const solver_config& cfg) {
  cfg.validate();
  const grid_spec& s = cfg.grid;
  const int nx = s.nx, ny = s.ny;
  const int ni = nx - 2, nj = ny - 2;
  const std::size_t n_unknown = static_cast<std::size_t>(ni) * nj;

  std::vector<double> rhs(n_unknown);
  for (int j = 1; j < ny - 1; ++j) {
    const double r = cfg.params.rhs(s.y(j));
    if (!std::isfinite(r))
      throw std::invalid_argument(
          "solve_dirichlet: RHS not finite at y=" + std::to_string(s.y(j)) +
          " (truncate with y_min > 0 for singular alpha)");
    for (int i = 1; i < nx - 1; ++i) rhs[static_cast<std::size_t>(j - 1) * ni + (i - 1)] = r;
  }

  std::vector<double> u = detail::initial_guess(cfg);
  for (double v : u)
    if (!std::isfinite(v))
      throw std::invalid_argument("solve_dirichlet: boundary data not finite");

  const double ihx2 = 1.0 / (s.hx() * s.hx());
  const double ihy2 = 1.0 / (s.hy() * s.hy());
  const double ixy = 1.0 / (4.0 * s.hx() * s.hy());
  auto interior = [ni](int i, int j) { return static_cast<long>(j - 1) * ni + (i - 1); };

  std::vector<double> F(n_unknown), F_trial(n_unknown), u_trial(u.size());
  solve_report rep{scalar_field(s, u), 0, 0.0, false, 0, {}};

  double res = detail::newton_residual(u, s, rhs, F);
  rep.residual_history.push_back(res);

  Eigen::SparseMatrix<double> J(static_cast<long>(n_unknown), static_cast<long>(n_unknown));
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd minus_f(static_cast<long>(n_unknown)), delta;

  for (int iter = 0; iter < cfg.max_iters && res > cfg.newton_tol; ++iter) {
    // Assemble the linearization J = Dyy*Dxx + Dxx*Dyy - 2*Dxy*Dxy around u.
    trips.clear();
    for (int j = 1; j < ny - 1; ++j) {
      for (int i = 1; i < nx - 1; ++i) {
        const std::size_t c = static_cast<std::size_t>(j) * nx + i;
        const double dxx = (u[c - 1] - 2.0 * u[c] + u[c + 1]) * ihx2;
        const double dyy = (u[c - nx] - 2.0 * u[c] + u[c + nx]) * ihy2;
        const double dxy = (u[c + nx + 1] - u[c + nx - 1] - u[c - nx + 1] + u[c - nx - 1]) * ixy;
        const long row = interior(i, j);
        auto add = [&](int ii, int jj, double v) {
          if (ii >= 1 && ii <= nx - 2 && jj >= 1 && jj <= ny - 2)
            trips.emplace_back(row, interior(ii, jj), v);
        };
        add(i, j, -2.0 * dyy * ihx2 - 2.0 * dxx * ihy2);
        add(i - 1, j, dyy * ihx2);
        add(i + 1, j, dyy * ihx2);
        add(i, j - 1, dxx * ihy2);
        add(i, j + 1, dxx * ihy2);
        const double cxy = -2.0 * dxy * ixy;
        add(i + 1, j + 1, cxy);
        add(i - 1, j - 1, cxy);
        add(i + 1, j - 1, -cxy);
        add(i - 1, j + 1, -cxy);
      }
    }
    J.setFromTriplets(trips.begin(), trips.end());
    for (std::size_t k = 0; k < n_unknown; ++k) minus_f[static_cast<long>(k)] = -F[k];

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("solve_dirichlet: singular Newton system at iteration " +
                               std::to_string(iter));
    delta = lu.solve(minus_f);

    // Backtracking: halve the step until the residual sup-norm drops.
    double t = cfg.damping;
    bool accepted = false;
    for (int bt = 0; bt <= 30; ++bt, t *= 0.5) {
      u_trial = u;
      for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i)
          u_trial[static_cast<std::size_t>(j) * nx + i] += t * delta[interior(i, j)];
      const double res_trial = detail::newton_residual(u_trial, s, rhs, F_trial);
      if (res_trial < res) {
        u.swap(u_trial);
        F.swap(F_trial);
        res = res_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // divergence: no step length reduces the residual
    ++rep.iterations;
    rep.residual_history.push_back(res);
  }

  rep.final_residual = res;
  rep.converged = res <= cfg.newton_tol;
  rep.solution = scalar_field(s, std::move(u));
  rep.convexity_violations = convexity_audit(rep.solution);
  return rep;
}

}  // namespace degma
