#pragma once

// Shared helpers for the test suites: an independently derived closed form
// for the transformed Dirichlet solution, composite-Simpson quadrature for
// re-deriving the family's height integral, refinement-order arithmetic,
// and a tiny deterministic RNG wrapper.

#include <cmath>
#include <functional>
#include <random>

#include "degma/core.hpp"

namespace degma::testing {

// The x-conjugate of the Dirichlet family, written directly in the (xi, eta)
// variables:
//
//   u*(xi, eta) = (1 + A*eta) xi^2/2 + C*xi*eta + B*eta - G(eta),
//
// with G the same constant-subtracted double antiderivative of
// (1 + A*eta)(a + b*eta)^alpha that appears in the family itself. Derived by
// eliminating x from x*u_x - u and checked symbolically; it satisfies
// (a + b*eta)^alpha u*_xixi + u*_etaeta = 0 identically.
inline double dirichlet_star_value(const equation_params& p, const family_coeffs& c, double xi,
                                   double eta) {
  const double a = p.a, b = p.b, al = p.alpha, A = c.A;
  double G;
  if (std::abs(al + 1.0) <= 1e-12) {
    const double t = a + b * eta;
    G = (b - a * A) * (t * std::log(t) - a * std::log(a)) / (b * b * b) +
        A * eta * eta / (2.0 * b);
  } else {
    const double t = a + b * eta;
    G = (b - a * A) * (std::pow(t, 2.0 + al) - std::pow(a, 2.0 + al)) /
            (b * b * b * (1.0 + al) * (2.0 + al)) +
        A * (std::pow(t, 3.0 + al) - std::pow(a, 3.0 + al)) /
            (b * b * b * (2.0 + al) * (3.0 + al));
  }
  return (1.0 + A * eta) * xi * xi / 2.0 + c.C * xi * eta + c.B * eta - G;
}

/// Composite Simpson on [lo, hi] with n subintervals (n made even).
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
  if (n % 2) ++n;
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int k = 1; k < n; ++k) s += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// log2 of the error ratio under one grid halving.
inline double observed_order(double err_coarse, double err_fine) {
  return std::log2(err_coarse / err_fine);
}

struct rng {
  std::mt19937_64 eng;
  explicit rng(unsigned long long seed) : eng(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng);
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
};

/// Sup-norm of field minus a reference function over all grid nodes.
template <typename F>
double sup_diff(const scalar_field& f, F&& ref) {
  const grid_spec& s = f.spec();
  double m = 0.0;
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) m = std::max(m, std::abs(f(i, j) - ref(s.x(i), s.y(j))));
  return m;
}

}  // namespace degma::testing
