#pragma once

// Discrete partial Legendre transform in the x-variable. For a field u that
// is strictly convex in x along every y-slice,
//
//   u*(xi, eta) = max_x ( x*xi - u(x, eta) ),   (xi, eta) = (u_x, y),
//
// computed slice by slice as a Legendre-Fenchel conjugate on a uniform
// xi-grid spanning the intersection of the per-slice slope ranges. The
// conjugate of the conjugate recovers u (involution on convex functions),
// and on transformed fields the Monge-Ampere equation becomes the linear
// Grushin-type equation (a + b*eta)^alpha u*_xixi + u*_etaeta = 0.
//
// Accuracy note: the plain discrete maximum is only O(h) accurate because
// the true maximizer falls between nodes. Each conjugate value is therefore
// refined by one exact maximization of the local quadratic model through the
// argmax node and its neighbours, which restores O(h^2) and keeps second
// differences of u* usable. Exact quadratic slices are reproduced exactly.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "degma/core.hpp"

namespace degma {

/// Conjugation strategy: `direct` scans every node per output point (O(n^2)
/// per slice); `monotone` exploits that the argmax index is nondecreasing in
/// xi (O(n) per slice). Both produce identical values.
enum class conjugation_path { direct, monotone };

struct plt_result {
  scalar_field field_star;
  grid_spec xi_spec;
};

namespace detail {

// Strict-convexity guard for one slice; j and y only feed the error message.
inline void require_convex_slice(std::span<const double> u, int j, double y, const char* who) {
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    if (!(u[i - 1] - 2.0 * u[i] + u[i + 1] > 0.0))
      throw std::runtime_error(std::string(who) + ": slice j=" + std::to_string(j) + " (y=" +
                               std::to_string(y) + ") is not strictly convex in x");
  }
}

// Second-order one-sided slope estimates at the slice ends; exact on
// quadratics, so quadratic inputs get their exact slope range.
inline double slope_lo(std::span<const double> u, double h) {
  return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
}
inline double slope_hi(std::span<const double> u, double h) {
  const std::size_t n = u.size();
  return (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
}

// Conjugate one slice onto the xi nodes. `k0` carries the monotone-path
// argmax cursor across xi values.
inline void conjugate_slice(std::span<const double> u, double x0, double h,
                            std::span<const double> xi, conjugation_path path,
                            std::span<double> out) {
  const int n = static_cast<int>(u.size());
  auto pay = [&](double s, int i) { return s * (x0 + i * h) - u[i]; };
  int k0 = 0;
  for (std::size_t m = 0; m < xi.size(); ++m) {
    const double s = xi[m];
    int k;
    if (path == conjugation_path::monotone) {
      while (k0 + 1 < n && pay(s, k0 + 1) >= pay(s, k0)) ++k0;
      k = k0;
    } else {
      k = 0;
      for (int i = 1; i < n; ++i)
        if (pay(s, i) >= pay(s, k)) k = i;
    }
    double best = pay(s, k);
    if (k > 0 && k < n - 1) {
      // Quadratic model through nodes k-1, k, k+1: slope sl, curvature q > 0
      // (strict convexity). Maximize s*(x_k + t) - model(t) over |t| <= h.
      const double sl = (u[k + 1] - u[k - 1]) / (2.0 * h);
      const double q = (u[k + 1] - 2.0 * u[k] + u[k - 1]) / (h * h);
      const double t = std::clamp((s - sl) / q, -h, h);
      const double cand = s * (x0 + k * h + t) - (u[k] + sl * t + 0.5 * q * t * t);
      best = std::max(best, cand);
    }
    out[m] = best;
  }
}

// Shared core of plt_forward / plt_inverse: conjugate along x, every y-slice.
inline scalar_field conjugate_in_x(const scalar_field& u, int n_xi, conjugation_path path,
                                   const char* who) {
  const grid_spec& s = u.spec();
  if (n_xi < 3) throw std::invalid_argument(std::string(who) + ": need n_xi >= 3");
  const double h = s.hx();

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.ny; ++j) {
    std::span<const double> row = u.values().subspan(scalar_field::index(s, 0, j), s.nx);
    require_convex_slice(row, j, s.y(j), who);
    lo = std::max(lo, slope_lo(row, h));
    hi = std::min(hi, slope_hi(row, h));
  }
  if (!(hi - lo > 1e-12 * (1.0 + std::abs(lo) + std::abs(hi))))
    throw std::runtime_error(std::string(who) + ": degenerate u_x range [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "]");

  grid_spec star_spec(lo, hi, s.y_min, s.y_max, n_xi, s.ny);
  std::vector<double> xi(n_xi);
  for (int m = 0; m < n_xi; ++m) xi[m] = star_spec.x(m);

  std::vector<double> out(star_spec.size());
  for (int j = 0; j < s.ny; ++j) {
    std::span<const double> row = u.values().subspan(scalar_field::index(s, 0, j), s.nx);
    std::span<double> dst(out.data() + scalar_field::index(star_spec, 0, j), n_xi);
    conjugate_slice(row, s.x_min, h, xi, path, dst);
  }
  return scalar_field(star_spec, std::move(out));
}

}  // namespace detail

inline plt_result plt_forward(const scalar_field& u, int n_xi,
                              conjugation_path path = conjugation_path::direct) {
  scalar_field star = detail::conjugate_in_x(u, n_xi, path, "plt_forward");
  grid_spec spec = star.spec();
  return plt_result{std::move(star), spec};
}

inline scalar_field plt_inverse(const plt_result& star, int n_x,
                                conjugation_path path = conjugation_path::direct) {
  return detail::conjugate_in_x(star.field_star, n_x, path, "plt_inverse");
}

/// Residual of (a + b*eta)^alpha u*_xixi + u*_etaeta = 0 over interior nodes
/// (rows with a + b*eta <= 0 excluded).
inline residual_report grushin_residual(const scalar_field& star, const equation_params& p) {
  hessian_fields h = fd_hessian(star);
  const grid_spec& s = h.uxx.spec();
  residual_report rep;
  double sum = 0.0;
  for (int j = 0; j < s.ny; ++j) {
    const double eta = s.y(j);
    if (!(p.a + p.b * eta > 0.0)) continue;
    const double w = p.rhs(eta);
    for (int i = 0; i < s.nx; ++i) {
      const double r = std::abs(w * h.uxx(i, j) + h.uyy(i, j));
      sum += r;
      if (r >= rep.max_abs) {
        rep.max_abs = r;
        rep.argmax_x = s.x(i);
        rep.argmax_y = eta;
      }
      ++rep.n_evaluated;
    }
  }
  if (rep.n_evaluated == 0)
    throw std::runtime_error("grushin_residual: empty evaluation set (all rows excluded)");
  rep.mean_abs = sum / static_cast<double>(rep.n_evaluated);
  return rep;
}

/// v = u*_xixi - 1 by central differences, on interior xi-nodes (all
/// eta-rows kept). This is the field the divergence-form change of variables
/// acts on; for boundary data x^2/2 it vanishes on eta = 0.
inline scalar_field second_diff_in_xi(const scalar_field& star) {
  const grid_spec& s = star.spec();
  if (s.nx < 5) throw std::invalid_argument("second_diff_in_xi: grid too small (need nx >= 5)");
  const double h = s.hx();
  grid_spec inner(s.x_min + h, s.x_max - h, s.y_min, s.y_max, s.nx - 2, s.ny);
  std::vector<double> v(inner.size());
  for (int j = 0; j < s.ny; ++j)
    for (int i = 1; i < s.nx - 1; ++i)
      v[scalar_field::index(inner, i - 1, j)] =
          (star(i - 1, j) - 2.0 * star(i, j) + star(i + 1, j)) / (h * h) - 1.0;
  return scalar_field(inner, std::move(v));
}

}  // namespace degma
