#pragma once

// The change of variables taking the Grushin-type equation to divergence
// form, the weighted Kelvin transform, moving-sphere inequality checks, and
// the one-dimensional half-space profiles they classify.
//
// With eta = f(x2) := b^{-alpha/(alpha+2)} ((alpha+2)/2 * x2)^{2/(alpha+2)} - a/b,
// a solution v(xi, eta) of (a + b*eta)^alpha v_xixi + v_etaeta = 0 pulls back
// to vt(x1, x2) = v(x1, f(x2)) solving div(x2^{a_w} grad vt) = 0 with weight
// exponent a_w = alpha/(alpha+2); the boundary ray {eta = 0} lands at
// x2 = l := 2 a^{(alpha+2)/2} / (b (alpha+2)), so l = 0 exactly when a = 0.
//
// One-dimensional solutions of the divergence-form equation on a half-space
// that vanish at x_n = l are the profiles c_star * (x_n^{1-a_w} - l^{1-a_w})
// with c_star >= 0 (and c_star = 0 forced when a_w >= 1). The weighted
// Kelvin transform maps solutions to solutions, which the moving-sphere
// comparison arguments exploit; both are provided as point evaluators in
// general dimension n >= 2.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "degma/core.hpp"

namespace degma {

using point = std::vector<double>;

/// Divergence-form data derived from (a, b, alpha): weight exponent a_w,
/// boundary offset l, ambient dimension n (grid operations fix n = 2).
struct divform_params {
  double a_w;
  double l;
  int n;

  divform_params(double a_w_, double l_, int n_ = 2) : a_w(a_w_), l(l_), n(n_) {
    if (!(l >= 0.0)) throw std::invalid_argument("divform_params: l must be >= 0");
    if (n < 2) throw std::invalid_argument("divform_params: n must be >= 2");
  }

  static divform_params from_equation(const equation_params& p) {
    if (!(p.alpha > -2.0))
      throw std::domain_error("divform_params: alpha must be > -2");
    const double aw = p.alpha / (p.alpha + 2.0);
    const double l = 2.0 * std::pow(p.a, (p.alpha + 2.0) / 2.0) / (p.b * (p.alpha + 2.0));
    return divform_params(aw, l, 2);
  }
};

/// eta = f(x2); strictly increasing, f(l) = 0.
inline double eta_of_x2(const equation_params& p, double x2) {
  if (!(p.alpha > -2.0)) throw std::domain_error("eta_of_x2: alpha must be > -2");
  if (!(x2 >= 0.0)) throw std::invalid_argument("eta_of_x2: x2 must be >= 0");
  const double e = 2.0 / (p.alpha + 2.0);
  return std::pow(p.b, -p.alpha / (p.alpha + 2.0)) *
             std::pow((p.alpha + 2.0) / 2.0 * x2, e) -
         p.a / p.b;
}

/// Inverse of eta_of_x2 on eta >= -a/b.
inline double x2_of_eta(const equation_params& p, double eta) {
  if (!(p.alpha > -2.0)) throw std::domain_error("x2_of_eta: alpha must be > -2");
  const double t = eta + p.a / p.b;
  if (t < 0.0) throw std::invalid_argument("x2_of_eta: eta below the image of f");
  return 2.0 * std::pow(p.b, p.alpha / 2.0) * std::pow(t, (p.alpha + 2.0) / 2.0) /
         (p.alpha + 2.0);
}

/// Resample v(xi, eta) as vt(x1, x2) = v(x1, f(x2)) on a uniform (x1, x2)
/// grid covering the same eta-range. Interpolation along eta is cubic
/// (4-point Lagrange, stencil clamped at the ends); n_x2 = 0 keeps the input
/// row count.
inline scalar_field pullback_to_divform(const scalar_field& v, const equation_params& p,
                                        int n_x2 = 0) {
  const grid_spec& s = v.spec();
  if (n_x2 == 0) n_x2 = s.ny;
  if (n_x2 < 3) throw std::invalid_argument("pullback_to_divform: need n_x2 >= 3");
  if (s.y_min < -p.a / p.b - 1e-12 * (1.0 + std::abs(p.a / p.b)))
    throw std::invalid_argument("pullback_to_divform: eta-range outside the image of f");

  const double eta0 = std::max(s.y_min, -p.a / p.b);
  const double x2_lo = x2_of_eta(p, eta0);
  const double x2_hi = x2_of_eta(p, s.y_max);
  grid_spec out_spec(s.x_min, s.x_max, x2_lo, x2_hi, s.nx, n_x2);

  const double hy = s.hy();
  std::vector<double> out(out_spec.size());
  for (int j = 0; j < n_x2; ++j) {
    double eta = eta_of_x2(p, out_spec.y(j));
    eta = std::clamp(eta, s.y_min, s.y_max);
    // 4-point Lagrange stencil around eta, clamped to the grid.
    int jc = static_cast<int>(std::floor((eta - s.y_min) / hy));
    int j0 = std::clamp(jc - 1, 0, s.ny - 4);
    double w[4];
    for (int m = 0; m < 4; ++m) {
      w[m] = 1.0;
      for (int k = 0; k < 4; ++k) {
        if (k == m) continue;
        w[m] *= (eta - s.y(j0 + k)) / (s.y(j0 + m) - s.y(j0 + k));
      }
    }
    for (int i = 0; i < s.nx; ++i) {
      double val = 0.0;
      for (int m = 0; m < 4; ++m) val += w[m] * v(i, j0 + m);
      out[scalar_field::index(out_spec, i, j)] = val;
    }
  }
  return scalar_field(out_spec, std::move(out));
}

/// Residual |v11 + v22 + a_w * v2 / x2| of the expanded divergence-form
/// operator over interior nodes with x2 > 0.
inline residual_report divform_residual(const scalar_field& f, double a_w) {
  const grid_spec& s = f.spec();
  const double hx = s.hx(), hy = s.hy();
  residual_report rep;
  double sum = 0.0;
  for (int j = 1; j < s.ny - 1; ++j) {
    const double x2 = s.y(j);
    if (!(x2 > 0.0)) continue;
    for (int i = 1; i < s.nx - 1; ++i) {
      const double v11 = detail::d2x(f, i, j, hx);
      const double v22 = detail::d2y(f, i, j, hy);
      const double v2 = (f(i, j + 1) - f(i, j - 1)) / (2.0 * hy);
      const double r = std::abs(v11 + v22 + a_w * v2 / x2);
      sum += r;
      if (r >= rep.max_abs) {
        rep.max_abs = r;
        rep.argmax_x = s.x(i);
        rep.argmax_y = x2;
      }
      ++rep.n_evaluated;
    }
  }
  if (rep.n_evaluated == 0)
    throw std::runtime_error("divform_residual: empty evaluation set (all rows at x2 <= 0)");
  rep.mean_abs = sum / static_cast<double>(rep.n_evaluated);
  return rep;
}

/// Signed residual (Laplacian u + a_w * u_n / x_n)(z) of the expanded
/// divergence-form operator in dimension n = z.size(), by step-h central
/// differences on a point evaluator. Used to test Kelvin invariance on
/// functions and in dimensions a 2-D grid cannot reach.
inline double divform_residual_at(const std::function<double(const point&)>& u, double a_w,
                                  const point& z, double h) {
  if (z.size() < 2) throw std::invalid_argument("divform_residual_at: need dimension >= 2");
  if (!(z.back() > 0.0))
    throw std::invalid_argument("divform_residual_at: x_n must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("divform_residual_at: h must be > 0");
  const double uc = u(z);
  double lap = 0.0;
  point zp = z, zm = z;
  double un = 0.0;
  for (std::size_t d = 0; d < z.size(); ++d) {
    zp[d] = z[d] + h;
    zm[d] = z[d] - h;
    const double up = u(zp), um = u(zm);
    lap += (up - 2.0 * uc + um) / (h * h);
    if (d + 1 == z.size()) un = (up - um) / (2.0 * h);
    zp[d] = z[d];
    zm[d] = z[d];
  }
  return lap + a_w * un / z.back();
}

/// c_star * (x_n^{1-a_w} - l^{1-a_w}): the one-dimensional half-space
/// profile; zero at x_n = l, nondecreasing. For a_w >= 1 only the trivial
/// profile (c_star = 0) exists.
inline double liouville_profile(double a_w, double l, double c_star, double x_n) {
  if (!(l >= 0.0)) throw std::invalid_argument("liouville_profile: l must be >= 0");
  if (!(c_star >= 0.0)) throw std::invalid_argument("liouville_profile: c_star must be >= 0");
  if (!(x_n >= l)) throw std::domain_error("liouville_profile: x_n must be >= l");
  if (a_w >= 1.0 && c_star != 0.0)
    throw std::domain_error("liouville_profile: a_w >= 1 forces c_star = 0");
  if (c_star == 0.0) return 0.0;
  return c_star * (std::pow(x_n, 1.0 - a_w) - std::pow(l, 1.0 - a_w));
}

/// Sphere data for Kelvin/moving-sphere operations: center on the boundary
/// hyperplane (last coordinate 0), radius lambda, comparison exponent tau.
struct kelvin_params {
  point center;
  double lambda;
  double tau;

  kelvin_params(point center_, double lambda_, double tau_ = 0.0)
      : center(std::move(center_)), lambda(lambda_), tau(tau_) {
    if (center.size() < 2) throw std::invalid_argument("kelvin_params: center dimension >= 2");
    if (center.back() != 0.0)
      throw std::invalid_argument("kelvin_params: center must lie on the boundary hyperplane");
    if (!(lambda > 0.0)) throw std::invalid_argument("kelvin_params: lambda must be > 0");
  }
};

namespace detail {

inline double dist(const point& a, const point& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

}  // namespace detail

/// Inversion y -> x + lambda^2 (y - x) / |y - x|^2 about the sphere.
inline point kelvin_point(const kelvin_params& kp, const point& y) {
  if (y.size() != kp.center.size())
    throw std::invalid_argument("kelvin_point: dimension mismatch");
  double r2 = 0.0;
  for (std::size_t d = 0; d < y.size(); ++d)
    r2 += (y[d] - kp.center[d]) * (y[d] - kp.center[d]);
  if (r2 == 0.0) throw std::invalid_argument("kelvin_point: y equals the center");
  point z(y.size());
  for (std::size_t d = 0; d < y.size(); ++d)
    z[d] = kp.center[d] + kp.lambda * kp.lambda * (y[d] - kp.center[d]) / r2;
  return z;
}

/// Weighted Kelvin transform of u at y:
///   (lambda/|y-x|)^{n-2+a_w} u(y^{x,lambda}),
/// or the additive form u(y^{x,lambda}) + ln(lambda/|y-x|) when the exponent
/// n-2+a_w vanishes. Points closer to the center than 1e-6*lambda are
/// refused: the transform sends them near infinity, outside any sampled data.
inline double kelvin_lift(const kelvin_params& kp, int n, double a_w,
                          const std::function<double(const point&)>& u, const point& y) {
  if (n < 2) throw std::invalid_argument("kelvin_lift: n must be >= 2");
  if (y.size() != kp.center.size())
    throw std::invalid_argument("kelvin_lift: dimension mismatch");
  if (y.back() < 0.0) throw std::invalid_argument("kelvin_lift: y must be in the upper half-space");
  const double r = detail::dist(y, kp.center);
  if (r < 1e-6 * kp.lambda)
    throw std::domain_error("kelvin_lift: evaluation too close to the center");
  const double e = n - 2.0 + a_w;
  const point z = kelvin_point(kp, y);
  if (std::abs(e) <= 1e-12) return u(z) + std::log(kp.lambda / r);
  return std::pow(kp.lambda / r, e) * u(z);
}

/// One failed comparison (lambda/|y-x|)^tau f(y^{x,lambda}) <= f(y): the
/// sample, both sides, and the (positive) margin lhs - rhs.
struct ms_violation {
  std::size_t index;
  point sample;
  double lhs;
  double rhs;
  double margin;
};

/// Evaluate the moving-sphere inequality at each sample in the closed
/// exterior of the sphere; returns the samples where it fails. With
/// log_variant the lhs is f(y^{x,lambda}) + ln(lambda/|y-x|) instead.
/// Failure means lhs > rhs beyond the rounding allowance 1e-12*(1+|rhs|).
inline std::vector<ms_violation> moving_sphere_check(
    const std::function<double(const point&)>& f, double tau, const kelvin_params& kp,
    const std::vector<point>& samples, bool log_variant = false) {
  std::vector<ms_violation> out;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const point& y = samples[k];
    if (y.size() != kp.center.size())
      throw std::invalid_argument("moving_sphere_check: dimension mismatch at sample " +
                                  std::to_string(k));
    if (y.back() < 0.0)
      throw std::invalid_argument("moving_sphere_check: sample " + std::to_string(k) +
                                  " below the boundary hyperplane");
    const double r = detail::dist(y, kp.center);
    if (r < kp.lambda * (1.0 - 1e-12))
      throw std::invalid_argument("moving_sphere_check: sample " + std::to_string(k) +
                                  " inside the open ball");
    const point z = kelvin_point(kp, y);
    const double rhs = f(y);
    const double lhs =
        log_variant ? f(z) + std::log(kp.lambda / r) : std::pow(kp.lambda / r, tau) * f(z);
    const double margin = lhs - rhs;
    if (margin > 1e-12 * (1.0 + std::abs(rhs))) out.push_back({k, y, lhs, rhs, margin});
  }
  return out;
}

}  // namespace degma
