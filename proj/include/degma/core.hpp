#pragma once

// Shared domain types for the half-plane Monge-Ampere toolkit: equation
// parameters, uniform rectangular grids, sampled scalar fields, and
// residual reports. Everything here is immutable after construction and
// all operations are pure, so concurrent use is safe.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace degma {

// Tolerances used throughout the test suites: exact algebraic identities
// are held to analytic_tol, grid-sampled comparisons to discrete_tol(sup).
inline constexpr double analytic_tol = 1e-9;

inline double discrete_tol(double sup_norm) { return 1e-6 * (1.0 + sup_norm); }

/// Parameters (a, b, alpha) of the right-hand side (a + b*y)^alpha.
struct equation_params {
  double a;
  double b;
  double alpha;

  equation_params(double a_, double b_, double alpha_) : a(a_), b(b_), alpha(alpha_) {
    if (!(a >= 0.0)) throw std::invalid_argument("equation_params: a must be >= 0");
    if (!(b > 0.0)) throw std::invalid_argument("equation_params: b must be > 0");
    if (!std::isfinite(alpha)) throw std::invalid_argument("equation_params: alpha must be finite");
  }

  /// (a + b*y)^alpha. Caller is responsible for a + b*y > 0.
  double rhs(double y) const { return std::pow(a + b * y, alpha); }
};

/// Free constants (A, B, C) selecting one member of a classified family.
struct family_coeffs {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  family_coeffs() = default;
  family_coeffs(double A_, double B_, double C_) : A(A_), B(B_), C(C_) {
    if (!(A >= 0.0)) throw std::invalid_argument("family_coeffs: A must be >= 0");
  }
};

/// Uniform rectangular grid: node counts per axis, closed bounds.
struct grid_spec {
  double x_min, x_max;
  double y_min, y_max;
  int nx, ny;

  grid_spec(double x_min_, double x_max_, double y_min_, double y_max_, int nx_, int ny_)
      : x_min(x_min_), x_max(x_max_), y_min(y_min_), y_max(y_max_), nx(nx_), ny(ny_) {
    if (!(x_min < x_max)) throw std::invalid_argument("grid_spec: x_min must be < x_max");
    if (!(y_min < y_max)) throw std::invalid_argument("grid_spec: y_min must be < y_max");
    if (nx < 3 || ny < 3) throw std::invalid_argument("grid_spec: need nx >= 3 and ny >= 3");
  }

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return (i == nx - 1) ? x_max : x_min + i * hx(); }
  double y(int j) const { return (j == ny - 1) ? y_max : y_min + j * hy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  bool operator==(const grid_spec&) const = default;
};

/// Grid-sampled real function. Storage is row-major with y as the outer
/// index: values[j*nx + i] holds the sample at (x_i, y_j).
class scalar_field {
 public:
  scalar_field(grid_spec spec, std::vector<double> values)
      : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.size())
      throw std::invalid_argument("scalar_field: values size does not match grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("scalar_field: non-finite value");
  }

  template <typename F>
  static scalar_field sample(const grid_spec& spec, F&& f) {
    std::vector<double> v(spec.size());
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) v[index(spec, i, j)] = f(spec.x(i), spec.y(j));
    return scalar_field(spec, std::move(v));
  }

  const grid_spec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  double operator()(int i, int j) const { return values_[index(spec_, i, j)]; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  static std::size_t index(const grid_spec& spec, int i, int j) {
    return static_cast<std::size_t>(j) * spec.nx + i;
  }

 private:
  grid_spec spec_;
  std::vector<double> values_;
};

/// Symmetric 2x2 second-derivative triple.
struct sym2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;
  double det() const { return xx * yy - xy * xy; }
};

/// Pointwise residual summary over the interior nodes that were evaluated.
struct residual_report {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double argmax_x = 0.0;
  double argmax_y = 0.0;
  long n_evaluated = 0;
};

struct hessian_fields {
  scalar_field uxx;
  scalar_field uxy;
  scalar_field uyy;
};

namespace detail {

inline grid_spec interior_spec(const grid_spec& s) {
  if (s.nx < 5 || s.ny < 5)
    throw std::invalid_argument("fd_hessian: grid too small (need nx, ny >= 5)");
  return grid_spec(s.x_min + s.hx(), s.x_max - s.hx(), s.y_min + s.hy(), s.y_max - s.hy(),
                   s.nx - 2, s.ny - 2);
}

// 3-point / cross second-difference stencils at an interior node (i, j).
inline double d2x(const scalar_field& u, int i, int j, double hx) {
  return (u(i - 1, j) - 2.0 * u(i, j) + u(i + 1, j)) / (hx * hx);
}
inline double d2y(const scalar_field& u, int i, int j, double hy) {
  return (u(i, j - 1) - 2.0 * u(i, j) + u(i, j + 1)) / (hy * hy);
}
inline double dxy(const scalar_field& u, int i, int j, double hx, double hy) {
  return (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) /
         (4.0 * hx * hy);
}

}  // namespace detail

/// Central-difference Hessian on the interior nodes; the boundary ring is
/// excluded, so the result fields live on the interior grid.
inline hessian_fields fd_hessian(const scalar_field& u) {
  const grid_spec& s = u.spec();
  grid_spec inner = detail::interior_spec(s);
  const double hx = s.hx(), hy = s.hy();
  std::vector<double> vxx(inner.size()), vxy(inner.size()), vyy(inner.size());
  for (int j = 1; j < s.ny - 1; ++j) {
    for (int i = 1; i < s.nx - 1; ++i) {
      std::size_t k = scalar_field::index(inner, i - 1, j - 1);
      vxx[k] = detail::d2x(u, i, j, hx);
      vyy[k] = detail::d2y(u, i, j, hy);
      vxy[k] = detail::dxy(u, i, j, hx, hy);
    }
  }
  return hessian_fields{scalar_field(inner, std::move(vxx)), scalar_field(inner, std::move(vxy)),
                        scalar_field(inner, std::move(vyy))};
}

/// Max/mean of |det D^2u - (a + b*y)^alpha| over interior nodes. Rows where
/// the weight a + b*y is not strictly positive are excluded; with a = 0 that
/// removes the singular y = 0 row automatically.
inline residual_report ma_residual(const scalar_field& u, const equation_params& p) {
  const grid_spec& s = u.spec();
  const double hx = s.hx(), hy = s.hy();
  residual_report rep;
  double sum = 0.0;
  for (int j = 1; j < s.ny - 1; ++j) {
    const double y = s.y(j);
    if (!(p.a + p.b * y > 0.0)) continue;
    const double rhs = p.rhs(y);
    for (int i = 1; i < s.nx - 1; ++i) {
      const double det = detail::d2x(u, i, j, hx) * detail::d2y(u, i, j, hy) -
                         detail::dxy(u, i, j, hx, hy) * detail::dxy(u, i, j, hx, hy);
      const double r = std::abs(det - rhs);
      sum += r;
      if (r >= rep.max_abs) {
        rep.max_abs = r;
        rep.argmax_x = s.x(i);
        rep.argmax_y = y;
      }
      ++rep.n_evaluated;
    }
  }
  if (rep.n_evaluated == 0)
    throw std::runtime_error("ma_residual: empty evaluation set (all rows excluded)");
  rep.mean_abs = sum / static_cast<double>(rep.n_evaluated);
  return rep;
}

}  // namespace degma
