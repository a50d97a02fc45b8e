#include "degma/partial_legendre.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "degma/closed_forms.hpp"
#include "degma/core.hpp"
#include "test_support.hpp"

using namespace degma;
using degma::testing::dirichlet_star_value;
using degma::testing::observed_order;
using degma::testing::sup_diff;

namespace {

scalar_field family_field(double a, double b, double alpha, double A, double B, double C,
                          const grid_spec& g) {
  dirichlet_family fam(equation_params(a, b, alpha), family_coeffs(A, B, C));
  return fam.sample(g);
}

}  // namespace

TEST(plt_forward, exact_on_quadratic_slices) {
  grid_spec g(-1.0, 1.0, 0.0, 1.0, 65, 5);
  scalar_field u = scalar_field::sample(g, [](double x, double) { return 0.5 * x * x; });
  plt_result star = plt_forward(u, 65);
  EXPECT_NEAR(star.xi_spec.x_min, -1.0, 1e-13);
  EXPECT_NEAR(star.xi_spec.x_max, 1.0, 1e-13);
  EXPECT_LE(sup_diff(star.field_star, [](double xi, double) { return 0.5 * xi * xi; }), 1e-12);

  scalar_field u2 = scalar_field::sample(g, [](double x, double) { return 2.0 * x * x; });
  scalar_field star2 = plt_forward(u2, 33).field_star;
  EXPECT_LE(sup_diff(star2, [](double xi, double) { return xi * xi / 8.0; }), 1e-12);
}

TEST(plt_forward, family_second_derivative_structure) {
  // On the transformed side the x-curvature becomes 1 + A*eta.
  grid_spec g(-2.0, 2.0, 0.0, 1.0, 257, 9);
  scalar_field u = family_field(0.0, 1.0, 1.0, 0.5, 0.0, 0.2, g);
  plt_result star = plt_forward(u, 257);
  scalar_field v = second_diff_in_xi(star.field_star);
  double worst = 0.0;
  for (int j = 0; j < v.spec().ny; ++j)
    for (int i = 0; i < v.spec().nx; ++i)
      worst = std::max(worst, std::abs(v(i, j) - 0.5 * v.spec().y(j)));
  EXPECT_LE(worst, 2e-2);
}

TEST(plt_forward, boundary_slice_transforms_to_its_own_conjugate) {
  grid_spec g(-1.5, 1.5, 0.0, 1.0, 129, 5);
  scalar_field u = family_field(1.0, 1.0, 0.5, 0.7, -0.2, 0.4, g);
  plt_result star = plt_forward(u, 101);
  for (int i = 0; i < star.xi_spec.nx; ++i) {
    const double xi = star.xi_spec.x(i);
    EXPECT_NEAR(star.field_star(i, 0), 0.5 * xi * xi, 1e-10);
  }
}

TEST(plt_forward, fenchel_young_inequality_with_equality_attained) {
  grid_spec g(-1.0, 1.0, 0.0, 1.0, 129, 9);
  scalar_field u = family_field(0.5, 1.5, 1.0, 0.4, 0.1, -0.3, g);
  plt_result star = plt_forward(u, 97);
  for (int j = 0; j < g.ny; ++j) {
    for (int m = 0; m < star.xi_spec.nx; ++m) {
      const double xi = star.xi_spec.x(m);
      double slack_min = std::numeric_limits<double>::infinity();
      for (int i = 0; i < g.nx; ++i) {
        const double slack = u(i, j) + star.field_star(m, j) - g.x(i) * xi;
        EXPECT_GE(slack, -1e-9);
        slack_min = std::min(slack_min, slack);
      }
      EXPECT_LE(slack_min, 1e-3);  // equality at the maximizer, up to O(h^2)
    }
  }
}

TEST(plt_inverse, quadratic_roundtrips_and_constants_survive) {
  grid_spec g(-1.0, 1.0, 0.0, 1.0, 65, 5);
  scalar_field u = scalar_field::sample(g, [](double x, double) { return 0.5 * x * x; });
  scalar_field back = plt_inverse(plt_forward(u, 65), 65);
  EXPECT_LE(sup_diff(back, [](double x, double) { return 0.5 * x * x; }), 1e-8);

  scalar_field shifted = scalar_field::sample(g, [](double x, double) { return x * x + 7.0; });
  scalar_field back2 = plt_inverse(plt_forward(shifted, 65), 65);
  EXPECT_LE(sup_diff(back2, [](double x, double) { return x * x + 7.0; }), 1e-8);
}

TEST(plt_inverse, involution_error_decreases_under_refinement) {
  dirichlet_family fam(equation_params(0.0, 1.0, 1.0), family_coeffs(0.5, 0.0, 0.3));
  std::vector<double> errs;
  for (int n : {33, 65, 129}) {
    grid_spec g(-1.0, 1.0, 0.0, 1.0, n, 9);
    scalar_field back = plt_inverse(plt_forward(fam.sample(g), n), n);
    errs.push_back(sup_diff(back, [&](double x, double y) { return fam.value(x, y); }));
  }
  // Family slices are quadratic in x, so the vertex-polished conjugate can
  // bottom out at rounding noise; below that floor refinement is a no-op.
  const double floor = 1e-12;
  EXPECT_TRUE(errs[1] < errs[0] || errs[1] <= floor) << errs[0] << " -> " << errs[1];
  EXPECT_TRUE(errs[2] < errs[1] || errs[2] <= floor) << errs[1] << " -> " << errs[2];
  EXPECT_LE(errs[2], 1e-4);
}

TEST(conjugation_paths, monotone_matches_direct_bitwise) {
  grid_spec g(-1.3, 1.1, 0.0, 0.8, 77, 7);
  scalar_field u = family_field(0.3, 1.7, 0.75, 1.1, -0.4, 0.6, g);
  plt_result a = plt_forward(u, 61, conjugation_path::direct);
  plt_result b = plt_forward(u, 61, conjugation_path::monotone);
  ASSERT_EQ(a.field_star.spec(), b.field_star.spec());
  for (std::size_t k = 0; k < a.field_star.values().size(); ++k)
    EXPECT_EQ(a.field_star.values()[k], b.field_star.values()[k]);
}

TEST(plt_forward, rejects_bad_inputs) {
  grid_spec g(-1.0, 1.0, 0.0, 1.0, 33, 5);
  scalar_field concave = scalar_field::sample(g, [](double x, double) { return -x * x; });
  EXPECT_THROW(plt_forward(concave, 33), std::runtime_error);
  try {
    plt_forward(concave, 33);
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("slice j=0"), std::string::npos);
  }

  // Strictly convex slices whose slope ranges do not overlap.
  scalar_field split = scalar_field::sample(g, [](double x, double y) {
    return y < 0.5 ? 0.5 * (x - 10.0) * (x - 10.0) : 0.5 * (x + 10.0) * (x + 10.0);
  });
  EXPECT_THROW(plt_forward(split, 33), std::runtime_error);

  scalar_field fine = scalar_field::sample(g, [](double x, double) { return x * x; });
  EXPECT_THROW(plt_forward(fine, 2), std::invalid_argument);
}

TEST(grushin_residual, constants_and_separable_solutions) {
  grid_spec g(-1.0, 1.0, 0.0, 1.0, 33, 33);
  scalar_field ones(g, std::vector<double>(g.size(), 1.0));
  residual_report grep = grushin_residual(ones, equation_params(1.0, 1.0, 0.5));
  EXPECT_EQ(grep.max_abs, 0.0);
  EXPECT_EQ(grep.n_evaluated, 31L * 31L);

  // xi^2/2 - (a+b*eta)^{2+alpha}/(b^2(1+alpha)(2+alpha)) solves the equation.
  const double a = 1.0, b = 1.0, alpha = 0.5;
  scalar_field sep = scalar_field::sample(g, [&](double xi, double eta) {
    return 0.5 * xi * xi -
           std::pow(a + b * eta, 2.0 + alpha) / (b * b * (1.0 + alpha) * (2.0 + alpha));
  });
  EXPECT_LE(grushin_residual(sep, equation_params(a, b, alpha)).max_abs, 1e-3);
}

TEST(grushin_residual, analytic_star_refinement_order) {
  equation_params p(0.0, 1.0, 1.0);
  family_coeffs c(0.5, 0.2, 0.3);
  std::vector<double> errs;
  for (int n : {33, 65}) {
    grid_spec g(-2.0, 2.0, 0.0, 1.0, n, n);
    scalar_field star = scalar_field::sample(
        g, [&](double xi, double eta) { return dirichlet_star_value(p, c, xi, eta); });
    errs.push_back(grushin_residual(star, p).max_abs);
  }
  EXPECT_GE(observed_order(errs[0], errs[1]), 1.9);
}

TEST(grushin_residual, excludes_nonpositive_weight_rows) {
  grid_spec g(-1.0, 1.0, -5.0, -4.0, 9, 9);
  scalar_field f = scalar_field::sample(g, [](double xi, double) { return xi * xi; });
  EXPECT_THROW(grushin_residual(f, equation_params(0.0, 1.0, 1.0)), std::runtime_error);
}

TEST(second_diff_in_xi, exact_cases) {
  grid_spec g(-1.0, 1.0, 0.0, 1.0, 41, 7);
  scalar_field q = scalar_field::sample(g, [](double xi, double) { return 0.5 * xi * xi; });
  scalar_field v = second_diff_in_xi(q);
  EXPECT_EQ(v.spec().nx, 39);
  EXPECT_EQ(v.spec().ny, 7);
  for (double val : v.values()) EXPECT_NEAR(val, 0.0, 1e-9);

  scalar_field s = scalar_field::sample(
      g, [](double xi, double eta) { return 0.5 * xi * xi * (1.0 + eta); });
  scalar_field v2 = second_diff_in_xi(s);
  for (int j = 0; j < v2.spec().ny; ++j)
    for (int i = 0; i < v2.spec().nx; ++i) EXPECT_NEAR(v2(i, j), v2.spec().y(j), 1e-9);

  grid_spec tiny(-1.0, 1.0, 0.0, 1.0, 4, 5);
  scalar_field t = scalar_field::sample(tiny, [](double xi, double) { return xi * xi; });
  EXPECT_THROW(second_diff_in_xi(t), std::invalid_argument);
}

TEST(second_diff_in_xi, family_star_recovers_linear_height_profile) {
  equation_params p(0.0, 1.0, 1.0);
  family_coeffs c(0.7, 0.0, 0.0);
  grid_spec g(-2.0, 2.0, 0.0, 1.0, 129, 9);
  scalar_field star = scalar_field::sample(
      g, [&](double xi, double eta) { return dirichlet_star_value(p, c, xi, eta); });
  scalar_field v = second_diff_in_xi(star);
  for (int j = 0; j < v.spec().ny; ++j)
    for (int i = 0; i < v.spec().nx; ++i)
      EXPECT_NEAR(v(i, j), 0.7 * v.spec().y(j), 1e-9);
}

TEST(derivative_identity, star_curvature_inverts_x_curvature) {
  dirichlet_family fam(equation_params(0.0, 1.0, 1.0), family_coeffs(0.5, 0.0, 0.3));
  grid_spec g(-2.0, 2.0, 0.0, 1.0, 257, 9);
  plt_result star = plt_forward(fam.sample(g), 257);
  scalar_field v = second_diff_in_xi(star.field_star);
  for (int j = 0; j < v.spec().ny; ++j) {
    const double y = v.spec().y(j);
    const double uxx = fam.hessian(0.0, std::max(y, 1e-6)).xx;  // 1/(1+A*y)
    for (int i = 0; i < v.spec().nx; i += 16)
      EXPECT_NEAR((v(i, j) + 1.0) * uxx, 1.0, 1e-6);
  }
}
