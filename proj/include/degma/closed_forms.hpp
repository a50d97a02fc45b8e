#pragma once

// Closed-form solution families for det D^2u = (a + b*y)^alpha on the upper
// half plane, together with their exact gradients and Hessians.
//
// Dirichlet family (boundary data u(x, 0) = x^2/2):
//
//   u(x, y) = G(y) - B*y + (x - C*y)^2 / (2*(1 + A*y))
//
// where G collects the double antiderivative of (1 + A*y)*(a + b*y)^alpha
// normalised so that G(0) = 0:
//
//   alpha != -1:
//     G(y) = (b - a*A) * ((a+b*y)^(2+alpha) - a^(2+alpha)) / (b^3 (1+alpha)(2+alpha))
//          +        A  * ((a+b*y)^(3+alpha) - a^(3+alpha)) / (b^3 (2+alpha)(3+alpha))
//   alpha == -1 (requires a > 0):
//     G(y) = (b - a*A) * ((a+b*y) ln(a+b*y) - a ln a) / b^3 + A*y^2 / (2*b)
//
// Both branches satisfy det D^2u = (a + b*y)^alpha identically, u(x,0) =
// x^2/2, and are convex for A, 1 + A*y >= 0. The branch is fixed at
// construction: |alpha + 1| <= 1e-12 selects the logarithmic form.
//
// Neumann family (u_y(x, 0) = 0, weight y^alpha, alpha >= 0):
//
//   u(x, y) = x^2/(2A) + A*y^(2+alpha) / ((2+alpha)(1+alpha)) + p*x + q
//
// Entire family (solution on the whole plane, weight |y|^alpha):
//
//   u(x, y) = x^2/(2A) + A*B^2*y^2/2 + B*x*y
//           + A*|y|^(2+alpha) / ((2+alpha)(1+alpha)) + p*x + q*y + r

#include <cmath>
#include <stdexcept>

#include "degma/core.hpp"

namespace degma {

inline constexpr double log_branch_window = 1e-12;

class dirichlet_family {
 public:
  dirichlet_family(const equation_params& p, const family_coeffs& c) : p_(p), c_(c) {
    if (!(p.alpha > -2.0))
      throw std::domain_error("dirichlet_family: alpha must be > -2");
    log_branch_ = std::abs(p.alpha + 1.0) <= log_branch_window;
    if (log_branch_ && p.a == 0.0)
      throw std::domain_error("dirichlet_family: the alpha = -1 branch requires a > 0");
  }

  const equation_params& params() const { return p_; }
  const family_coeffs& coeffs() const { return c_; }
  bool log_branch() const { return log_branch_; }

  double value(double x, double y) const {
    check_y(y);
    const double m = 1.0 + c_.A * y;
    const double w = x - c_.C * y;
    return big_g(y) - c_.B * y + w * w / (2.0 * m);
  }

  std::array<double, 2> gradient(double x, double y) const {
    check_y(y);
    const double m = 1.0 + c_.A * y;
    const double w = x - c_.C * y;
    const double ux = w / m;
    const double uy = big_g_prime(y) - c_.B - c_.C * w / m - c_.A * w * w / (2.0 * m * m);
    return {ux, uy};
  }

  sym2 hessian(double x, double y) const {
    if (!(y > 0.0)) throw std::domain_error("dirichlet_hessian: y must be > 0");
    const double m = 1.0 + c_.A * y;
    const double w = x - c_.C * y;
    sym2 h;
    h.xx = 1.0 / m;
    h.xy = -c_.C / m - c_.A * w / (m * m);
    h.yy = m * p_.rhs(y) + c_.C * c_.C / m + 2.0 * c_.A * c_.C * w / (m * m) +
           c_.A * c_.A * w * w / (m * m * m);
    return h;
  }

  /// Sample u over a grid (grid must lie in the closed upper half plane).
  scalar_field sample(const grid_spec& spec) const {
    if (spec.y_min < 0.0)
      throw std::invalid_argument("dirichlet_family::sample: grid must have y_min >= 0");
    return scalar_field::sample(spec, [this](double x, double y) { return value(x, y); });
  }

 private:
  void check_y(double y) const {
    if (y < 0.0) throw std::domain_error("dirichlet_family: y must be >= 0");
    if (1.0 + c_.A * y <= 0.0)
      throw std::domain_error("dirichlet_family: 1 + A*y must stay positive");
  }

  double big_g(double y) const {
    const double a = p_.a, b = p_.b, al = p_.alpha, A = c_.A;
    const double t = a + b * y;
    if (log_branch_)
      return (b - a * A) * (t * std::log(t) - a * std::log(a)) / (b * b * b) +
             A * y * y / (2.0 * b);
    const double p1 = (std::pow(t, 2.0 + al) - std::pow(a, 2.0 + al)) /
                      (b * b * b * (1.0 + al) * (2.0 + al));
    const double p2 = (std::pow(t, 3.0 + al) - std::pow(a, 3.0 + al)) /
                      (b * b * b * (2.0 + al) * (3.0 + al));
    return (b - a * A) * p1 + A * p2;
  }

  double big_g_prime(double y) const {
    const double a = p_.a, b = p_.b, al = p_.alpha, A = c_.A;
    const double t = a + b * y;
    if (log_branch_) return (b - a * A) * (std::log(t) + 1.0) / (b * b) + A * y / b;
    return (b - a * A) * std::pow(t, 1.0 + al) / (b * b * (1.0 + al)) +
           A * std::pow(t, 2.0 + al) / (b * b * (2.0 + al));
  }

  equation_params p_;
  family_coeffs c_;
  bool log_branch_;
};

/// The B that makes u_y(0, 0) = 0 for given (a, b, alpha, A); useful for
/// comparing members across the alpha = -1 branch switch, where the free
/// constants of the two branches are related by a reparametrisation.
inline double dirichlet_neutral_B(const equation_params& p, double A) {
  if (!(p.alpha > -2.0)) throw std::domain_error("dirichlet_neutral_B: alpha must be > -2");
  const double a = p.a, b = p.b;
  if (std::abs(p.alpha + 1.0) <= log_branch_window) {
    if (a == 0.0) throw std::domain_error("dirichlet_neutral_B: alpha = -1 requires a > 0");
    return (b - a * A) * (1.0 + std::log(a)) / (b * b);
  }
  return (b - a * A) * std::pow(a, 1.0 + p.alpha) / (b * b * (1.0 + p.alpha)) +
         A * std::pow(a, 2.0 + p.alpha) / (b * b * (2.0 + p.alpha));
}

class neumann_family {
 public:
  neumann_family(double alpha, double A, double p = 0.0, double q = 0.0)
      : alpha_(alpha), A_(A), p_(p), q_(q) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("neumann_family: alpha must be >= 0");
    if (!(A > 0.0)) throw std::invalid_argument("neumann_family: A must be > 0");
  }

  double value(double x, double y) const {
    check_y(y);
    return x * x / (2.0 * A_) + A_ * std::pow(y, 2.0 + alpha_) / ((2.0 + alpha_) * (1.0 + alpha_)) +
           p_ * x + q_;
  }

  std::array<double, 2> gradient(double x, double y) const {
    check_y(y);
    return {x / A_ + p_, A_ * std::pow(y, 1.0 + alpha_) / (1.0 + alpha_)};
  }

  sym2 hessian(double /*x*/, double y) const {
    check_y(y);
    return sym2{1.0 / A_, 0.0, A_ * std::pow(y, alpha_)};
  }

 private:
  void check_y(double y) const {
    if (y < 0.0) throw std::domain_error("neumann_family: y must be >= 0");
  }

  double alpha_, A_, p_, q_;
};

class entire_family {
 public:
  entire_family(double alpha, double A, double B, double p = 0.0, double q = 0.0, double r = 0.0)
      : alpha_(alpha), A_(A), B_(B), p_(p), q_(q), r_(r) {
    if (!(alpha > -1.0)) throw std::invalid_argument("entire_family: alpha must be > -1");
    if (!(A > 0.0)) throw std::invalid_argument("entire_family: A must be > 0");
  }

  double value(double x, double y) const {
    const double ay = std::abs(y);
    return x * x / (2.0 * A_) + A_ * B_ * B_ * y * y / 2.0 + B_ * x * y +
           A_ * std::pow(ay, 2.0 + alpha_) / ((2.0 + alpha_) * (1.0 + alpha_)) + p_ * x + q_ * y +
           r_;
  }

  std::array<double, 2> gradient(double x, double y) const {
    const double ay = std::abs(y);
    const double sgn = (y > 0.0) ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
    return {x / A_ + B_ * y + p_,
            A_ * B_ * B_ * y + B_ * x + sgn * A_ * std::pow(ay, 1.0 + alpha_) / (1.0 + alpha_) + q_};
  }

  sym2 hessian(double /*x*/, double y) const {
    return sym2{1.0 / A_, B_, A_ * B_ * B_ + A_ * std::pow(std::abs(y), alpha_)};
  }

 private:
  double alpha_, A_, B_, p_, q_, r_;
};

/// Growth floor forced on any convex supersolution with det D^2u >=
/// (1/C) y^alpha when alpha <= -2; no globally bounded second derivative in
/// y is possible, and this quantifies the blow-up as y -> 0+.
///
///   alpha < -2:   y^(2+alpha) / (C (1+alpha)(2+alpha))
///   alpha == -2:  -ln(y) / C
inline double sharpness_lower_bound(double alpha, double C, double y) {
  if (!(C > 0.0)) throw std::invalid_argument("sharpness_lower_bound: C must be > 0");
  if (!(y > 0.0)) throw std::invalid_argument("sharpness_lower_bound: y must be > 0");
  if (std::abs(alpha + 2.0) <= 1e-12) return -std::log(y) / C;
  if (!(alpha < -2.0))
    throw std::domain_error("sharpness_lower_bound: alpha must be <= -2");
  return std::pow(y, 2.0 + alpha) / (C * (1.0 + alpha) * (2.0 + alpha));
}

}  // namespace degma
