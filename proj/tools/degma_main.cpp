// degma: command-line toolkit around the half-plane Monge-Ampere
// classification families and their transforms.
//
//   family       sample a closed-form family on a grid (CSV/JSON)
//   residual     audit |det D^2u - (a+by)^alpha| on a sampled field
//   plt          partial Legendre transform of a field + involution summary
//   divform      pull a (xi,eta) field back to divergence-form variables
//   kelvin-check grid study of the weighted Kelvin transform invariance
//   ms-check     moving-sphere inequality scan
//   solve        damped-Newton Dirichlet solve from a JSON config
//   convergence  3-grid solver convergence study against a closed form
//   sharpness    blow-up lower bound for alpha <= -2
//
// Exit codes: 0 success, 2 usage/validation error, 3 numerical failure.
// Identical invocations produce byte-identical artifacts.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "degma/closed_forms.hpp"
#include "degma/core.hpp"
#include "degma/io.hpp"
#include "degma/ma_solver.hpp"
#include "degma/partial_legendre.hpp"
#include "degma/transforms.hpp"

#include "embedded_schemas.hpp"
#include "schema.hpp"

namespace {

using nlohmann::json;
using namespace degma;

grid_spec parse_grid(const std::string& s) {
  double x0, x1, y0, y1;
  int nx, ny;
  char extra;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf,%d,%d %c", &x0, &x1, &y0, &y1, &nx, &ny, &extra) !=
      6)
    throw std::invalid_argument("--grid expects x_min,x_max,y_min,y_max,nx,ny");
  return grid_spec(x0, x1, y0, y1, nx, ny);
}

scalar_field load_field(const std::string& path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open for reading: " + path);
    return field_from_json(json::parse(is));
  }
  return read_csv_file(path);
}

void write_field(const scalar_field& f, const std::string& path, const std::string& format) {
  if (path.empty()) {
    if (format == "json")
      std::cout << field_to_json(f).dump(2) << '\n';
    else
      write_csv(f, std::cout);
    return;
  }
  if (format == "json")
    write_json_file(field_to_json(f), path);
  else
    write_csv_file(f, path);
}

void emit_json(const json& j, const std::string& path) {
  if (path.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(j, path);
}

json load_config(const std::string& path, const char* schema_text) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open for reading: " + path);
  json cfg = json::parse(is);
  degma::cli::validate_schema(cfg, json::parse(schema_text));
  return cfg;
}

double dist(const point& a, const point& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

// Visit every node of the axis-aligned lattice lo..hi with the given shape.
template <typename F>
void for_each_node(const std::vector<double>& lo, const std::vector<double>& hi,
                   const std::vector<int>& shape, F&& body) {
  const std::size_t n = shape.size();
  std::vector<int> k(n, 0);
  point y(n);
  for (;;) {
    for (std::size_t d = 0; d < n; ++d)
      y[d] = (shape[d] == 1) ? lo[d] : lo[d] + k[d] * (hi[d] - lo[d]) / (shape[d] - 1);
    body(y);
    std::size_t d = 0;
    while (d < n && ++k[d] == shape[d]) {
      k[d] = 0;
      ++d;
    }
    if (d == n) break;
  }
}

struct lattice {
  std::vector<double> lo, hi;
  std::vector<int> shape;
};

lattice lattice_from_json(const json& g, std::size_t dim, const std::string& path) {
  lattice lat{g.at("min").get<std::vector<double>>(), g.at("max").get<std::vector<double>>(),
              g.at("shape").get<std::vector<int>>()};
  if (lat.lo.size() != dim || lat.hi.size() != dim || lat.shape.size() != dim)
    throw std::invalid_argument(path + ": min/max/shape must all have length " +
                                std::to_string(dim));
  for (std::size_t d = 0; d < dim; ++d)
    if (!(lat.lo[d] < lat.hi[d]))
      throw std::invalid_argument(path + ": min must be < max on every axis");
  return lat;
}

std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& e) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < h.size(); ++k)
    out.push_back(std::log(e[k] / e[k + 1]) / std::log(h[k] / h[k + 1]));
  return out;
}

void run_family(const std::string& kind, double alpha, double a, double b, double A, double B,
                double C, double p, double q, double r, const std::string& grid_str,
                const std::string& out, const std::string& format) {
  grid_spec g = parse_grid(grid_str);
  if (kind == "neumann") {
    neumann_family nf(alpha, A, p, q);
    write_field(scalar_field::sample(g, [&](double x, double y) { return nf.value(x, y); }), out,
                format);
  } else if (kind == "entire") {
    entire_family ef(alpha, A, B, p, q, r);
    write_field(scalar_field::sample(g, [&](double x, double y) { return ef.value(x, y); }), out,
                format);
  } else {
    dirichlet_family df(equation_params(a, b, alpha), family_coeffs(A, B, C));
    write_field(df.sample(g), out, format);
  }
}

void run_plt(const std::string& in, int n_xi, int n_x, const std::string& path_name,
             const std::string& out, const std::string& summary) {
  scalar_field u = load_field(in);
  const conjugation_path cp =
      path_name == "monotone" ? conjugation_path::monotone : conjugation_path::direct;
  plt_result star = plt_forward(u, n_xi, cp);
  if (!out.empty()) write_csv_file(star.field_star, out);
  if (!summary.empty() || out.empty()) {
    const int nxb = n_x > 0 ? n_x : u.spec().nx;
    scalar_field back = plt_inverse(star, nxb, cp);
    // The recovered x-window is the slopes the slices share, a subset of the
    // input range, so the comparison linearly interpolates the input there.
    double d = 0.0;
    const grid_spec& gi = u.spec();
    for (int j = 0; j < back.spec().ny; ++j)
      for (int i = 0; i < nxb; ++i) {
        const double x = back.spec().x(i);
        int k = static_cast<int>(std::floor((x - gi.x_min) / gi.hx()));
        k = std::max(0, std::min(gi.nx - 2, k));
        const double s = (x - gi.x(k)) / gi.hx();
        const double uin = (1.0 - s) * u(k, j) + s * u(k + 1, j);
        d = std::max(d, std::abs(back(i, j) - uin));
      }
    json rt = {{"x_min", back.spec().x_min},
               {"x_max", back.spec().x_max},
               {"n_x", nxb},
               {"max_abs_diff", d}};
    json s = {{"xi_min", star.xi_spec.x_min},
              {"xi_max", star.xi_spec.x_max},
              {"n_xi", star.xi_spec.nx},
              {"roundtrip", rt}};
    emit_json(s, summary);
  }
}

void run_kelvin_check(const std::string& cfg_path, const std::string& out) {
  json cfg = load_config(cfg_path, degma::cli::kelvin_check_schema_text);
  const int n = cfg.at("n").get<int>();
  const double a_w = cfg.at("a_w").get<double>();
  const point center = cfg.at("center").get<point>();
  if (static_cast<int>(center.size()) != n)
    throw std::invalid_argument("config.center: length must equal n");
  kelvin_params kp(center, cfg.at("lambda").get<double>());
  const double l = cfg.at("profile").value("l", 0.0);
  const double c_star = cfg.at("profile").at("c_star").get<double>();
  const lattice lat = lattice_from_json(cfg.at("grid"), static_cast<std::size_t>(n), "config.grid");
  const double excl = cfg.value("exclusion_radius", 1e-2);

  // Half-space extension: the profile in the height variable, zero below l.
  auto u = [a_w, l, c_star](const point& y) {
    return y.back() >= l ? liouville_profile(a_w, l, c_star, y.back()) : 0.0;
  };
  std::function<double(const point&)> lifted = [&](const point& y) {
    return kelvin_lift(kp, n, a_w, u, y);
  };

  std::vector<double> hs = cfg.at("h_values").get<std::vector<double>>();
  std::vector<double> worst(hs.size(), 0.0);
  std::vector<long> counted(hs.size(), 0);
  for (std::size_t m = 0; m < hs.size(); ++m) {
    const double h = hs[m];
    for_each_node(lat.lo, lat.hi, lat.shape, [&](const point& y) {
      if (y.back() - h <= 0.0) return;            // stencil must stay in the half-space
      if (dist(y, center) < excl + h) return;     // keep stencils away from the center
      const double r = std::abs(divform_residual_at(lifted, a_w, y, h));
      worst[m] = std::max(worst[m], r);
      ++counted[m];
    });
    if (counted[m] == 0)
      throw std::invalid_argument("config.grid: no admissible nodes at h=" + fmt17(h));
  }
  emit_json({{"h_values", hs},
             {"max_residuals", worst},
             {"n_nodes", counted},
             {"observed_orders", observed_orders(hs, worst)}},
            out);
}

void run_ms_check(const std::string& cfg_path, const std::string& out) {
  json cfg = load_config(cfg_path, degma::cli::ms_check_schema_text);
  const point center = cfg.at("center").get<point>();
  kelvin_params kp(center, cfg.at("lambda").get<double>(), cfg.at("tau").get<double>());
  const bool log_variant = cfg.value("log_variant", false);

  const json& fn = cfg.at("function");
  const std::string kind = fn.at("kind").get<std::string>();
  std::function<double(const point&)> f;
  if (kind == "constant") {
    if (!fn.contains("value"))
      throw std::invalid_argument("config.function.value: required for kind 'constant'");
    const double c = fn.at("value").get<double>();
    f = [c](const point&) { return c; };
  } else if (kind == "height") {
    f = [](const point& y) { return y.back(); };
  } else {
    for (const char* key : {"a_w", "c_star"})
      if (!fn.contains(key))
        throw std::invalid_argument(std::string("config.function.") + key +
                                    ": required for kind 'profile'");
    const double a_w = fn.at("a_w").get<double>();
    const double l = fn.value("l", 0.0);
    const double c_star = fn.at("c_star").get<double>();
    f = [a_w, l, c_star](const point& y) {
      return y.back() >= l ? liouville_profile(a_w, l, c_star, y.back()) : 0.0;
    };
  }

  if (cfg.contains("samples") == cfg.contains("grid"))
    throw std::invalid_argument("config: exactly one of 'samples' or 'grid' is required");

  std::vector<point> samples;
  if (cfg.contains("samples")) {
    samples = cfg.at("samples").get<std::vector<point>>();
    for (std::size_t k = 0; k < samples.size(); ++k)
      if (samples[k].size() != center.size())
        throw std::invalid_argument("config.samples[" + std::to_string(k) +
                                    "]: length must match center");
  } else {
    // Grid mode scans the lattice, keeping only admissible exterior points.
    const lattice lat = lattice_from_json(cfg.at("grid"), center.size(), "config.grid");
    for_each_node(lat.lo, lat.hi, lat.shape, [&](const point& y) {
      if (y.back() < 0.0) return;
      if (dist(y, center) < kp.lambda * (1.0 - 1e-12)) return;
      samples.push_back(y);
    });
  }

  const std::vector<ms_violation> bad =
      moving_sphere_check(f, kp.tau, kp, samples, log_variant);
  json jb = json::array();
  for (const ms_violation& v : bad)
    jb.push_back({{"index", v.index},
                  {"point", v.sample},
                  {"lhs", v.lhs},
                  {"rhs", v.rhs},
                  {"margin", v.margin}});
  emit_json({{"n_samples", samples.size()}, {"n_violations", bad.size()}, {"violations", jb}},
            out);
}

void run_solve(const std::string& cfg_path, const std::string& out_field,
               const std::string& out_report) {
  json cfg = load_config(cfg_path, degma::cli::solve_schema_text);
  grid_spec g = grid_from_json(cfg.at("grid"));
  const json& pj = cfg.at("params");
  equation_params p(pj.at("a").get<double>(), pj.at("b").get<double>(),
                    pj.at("alpha").get<double>());
  const json& bj = cfg.at("boundary");
  dirichlet_family df(p, family_coeffs(bj.value("A", 0.0), bj.value("B", 0.0),
                                       bj.value("C", 0.0)));

  solver_config sc(g, p, [df](double x, double y) { return df.value(x, y); });
  if (cfg.contains("newton")) {
    const json& nj = cfg.at("newton");
    sc.newton_tol = nj.value("tol", sc.newton_tol);
    sc.max_iters = nj.value("max_iters", sc.max_iters);
    sc.damping = nj.value("damping", sc.damping);
    if (nj.value("init", std::string("boundary_blend")) == std::string("quadratic"))
      sc.init = solver_init::quadratic;
  }

  solve_report rep = solve_dirichlet(sc);
  if (!out_field.empty()) write_csv_file(rep.solution, out_field);
  emit_json(solve_report_to_json(rep), out_report);
  if (!rep.converged)
    throw std::runtime_error("solve: did not converge (final residual " +
                             fmt17(rep.final_residual) + ")");
}

void run_convergence(double alpha, double a, double b, double A, double B, double C,
                     const std::string& domain_str, const std::string& grids_str,
                     const std::string& init_name, double tol, int max_iters,
                     const std::string& out) {
  double x0, x1, y0, y1;
  char extra;
  if (std::sscanf(domain_str.c_str(), "%lf,%lf,%lf,%lf %c", &x0, &x1, &y0, &y1, &extra) != 4)
    throw std::invalid_argument("--domain expects x_min,x_max,y_min,y_max");
  std::vector<int> ns;
  {
    std::string tail = grids_str;
    while (!tail.empty()) {
      std::size_t pos = tail.find(',');
      ns.push_back(std::stoi(tail.substr(0, pos)));
      tail = (pos == std::string::npos) ? std::string() : tail.substr(pos + 1);
    }
  }
  if (ns.size() < 2) throw std::invalid_argument("--grids needs at least two node counts");

  equation_params p(a, b, alpha);
  dirichlet_family df(p, family_coeffs(A, B, C));

  json runs = json::array();
  std::vector<double> hs, errs;
  bool all_converged = true;
  for (int n : ns) {
    grid_spec g(x0, x1, y0, y1, n, n);
    solver_config sc(g, p, [df](double x, double y) { return df.value(x, y); });
    sc.newton_tol = tol;
    sc.max_iters = max_iters;
    sc.init = (init_name == "quadratic") ? solver_init::quadratic : solver_init::boundary_blend;
    solve_report rep = solve_dirichlet(sc);
    double err = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        err = std::max(err, std::abs(rep.solution(i, j) - df.value(g.x(i), g.y(j))));
    const double h = std::max(g.hx(), g.hy());
    hs.push_back(h);
    errs.push_back(err);
    all_converged = all_converged && rep.converged;
    runs.push_back({{"n", n},
                    {"h", h},
                    {"max_error", err},
                    {"iterations", rep.iterations},
                    {"final_residual", rep.final_residual},
                    {"converged", rep.converged},
                    {"convexity_violations", rep.convexity_violations}});
  }
  emit_json({{"runs", runs}, {"observed_orders", observed_orders(hs, errs)}}, out);
  if (!all_converged) throw std::runtime_error("convergence: a solve did not converge");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degma: solution families, transforms, and numerical checks for degenerate "
               "Monge-Ampere problems on the half plane"};
  app.require_subcommand(1);

  // family
  auto* fam = app.add_subcommand("family", "Sample a closed-form solution family on a grid");
  std::string fam_kind{"dirichlet"}, fam_grid, fam_out, fam_format{"csv"};
  double f_alpha{}, f_a{0}, f_b{1}, f_A{0}, f_B{0}, f_C{0}, f_p{0}, f_q{0}, f_r{0};
  fam->add_option("--family", fam_kind, "dirichlet|neumann|entire")
      ->check(CLI::IsMember({"dirichlet", "neumann", "entire"}));
  fam->add_option("--alpha", f_alpha, "RHS exponent")->required();
  fam->add_option("--a", f_a, "RHS offset (dirichlet)");
  fam->add_option("--b", f_b, "RHS slope (dirichlet)");
  fam->add_option("--A", f_A, "family coefficient A");
  fam->add_option("--B", f_B, "family coefficient B");
  fam->add_option("--C", f_C, "family coefficient C (dirichlet)");
  fam->add_option("--p", f_p, "linear term p (neumann/entire)");
  fam->add_option("--q", f_q, "linear term q (neumann/entire)");
  fam->add_option("--r", f_r, "constant term r (entire)");
  fam->add_option("--grid", fam_grid, "x_min,x_max,y_min,y_max,nx,ny")->required();
  fam->add_option("--out", fam_out, "output path (default stdout)");
  fam->add_option("--format", fam_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  fam->callback([&] {
    run_family(fam_kind, f_alpha, f_a, f_b, f_A, f_B, f_C, f_p, f_q, f_r, fam_grid, fam_out,
               fam_format);
  });

  // residual
  auto* res = app.add_subcommand("residual", "Monge-Ampere residual report for a sampled field");
  std::string res_in, res_out;
  double r_alpha{}, r_a{0}, r_b{1};
  res->add_option("--in", res_in, "field CSV/JSON path")->required();
  res->add_option("--alpha", r_alpha)->required();
  res->add_option("--a", r_a);
  res->add_option("--b", r_b);
  res->add_option("--out", res_out, "report path (default stdout)");
  res->callback([&] {
    emit_json(report_to_json(ma_residual(load_field(res_in), equation_params(r_a, r_b, r_alpha))),
              res_out);
  });

  // plt
  auto* plt = app.add_subcommand("plt", "Partial Legendre transform of a sampled field");
  std::string plt_in, plt_out, plt_summary, plt_path{"direct"};
  int plt_nxi{0}, plt_nx{0};
  plt->add_option("--in", plt_in, "field CSV/JSON path")->required();
  plt->add_option("--n-xi", plt_nxi, "xi nodes of the transform")->required();
  plt->add_option("--n-x", plt_nx, "x nodes of the round trip (default: input nx)");
  plt->add_option("--path", plt_path, "direct|monotone")
      ->check(CLI::IsMember({"direct", "monotone"}));
  plt->add_option("--out", plt_out, "u* CSV path");
  plt->add_option("--summary", plt_summary, "involution summary JSON path (default stdout)");
  plt->callback([&] { run_plt(plt_in, plt_nxi, plt_nx, plt_path, plt_out, plt_summary); });

  // divform
  auto* div = app.add_subcommand("divform",
                                 "Pull a (xi,eta) field back to divergence-form variables "
                                 "and/or audit the divergence-form residual");
  std::string div_in, div_out, div_report;
  int div_nx2{0};
  double d_alpha{}, d_a{0}, d_b{1}, d_aw{};
  div->add_option("--in", div_in, "field CSV/JSON path")->required();
  auto* div_alpha = div->add_option("--alpha", d_alpha, "pullback mode: RHS exponent");
  div->add_option("--a", d_a, "pullback mode: RHS offset");
  div->add_option("--b", d_b, "pullback mode: RHS slope");
  auto* div_aw = div->add_option("--a-w", d_aw, "residual-only mode: weight exponent");
  div_alpha->excludes(div_aw);
  div_aw->excludes(div_alpha);
  div->add_option("--n-x2", div_nx2, "x2 nodes of the pullback (default: input ny)");
  div->add_option("--out", div_out, "pulled-back field CSV path");
  div->add_option("--report", div_report, "residual report JSON path");
  div->callback([&] {
    scalar_field in = load_field(div_in);
    if (div_aw->count() > 0) {
      if (!div_out.empty())
        throw std::invalid_argument("--out requires pullback mode (--alpha)");
      emit_json(report_to_json(divform_residual(in, d_aw)), div_report);
      return;
    }
    if (div_alpha->count() == 0)
      throw std::invalid_argument("one of --alpha (pullback) or --a-w (residual only) required");
    equation_params p(d_a, d_b, d_alpha);
    scalar_field vt = pullback_to_divform(in, p, div_nx2);
    if (!div_out.empty()) write_csv_file(vt, div_out);
    if (!div_report.empty() || div_out.empty())
      emit_json(report_to_json(divform_residual(vt, divform_params::from_equation(p).a_w)),
                div_report);
  });

  // kelvin-check
  auto* kel = app.add_subcommand("kelvin-check",
                                 "Residual study of the weighted Kelvin lift of a profile");
  std::string kel_cfg, kel_out;
  kel->add_option("--config", kel_cfg, "JSON config path")->required();
  kel->add_option("--out", kel_out, "output JSON path (default stdout)");
  kel->callback([&] { run_kelvin_check(kel_cfg, kel_out); });

  // ms-check
  auto* ms = app.add_subcommand("ms-check", "Moving-sphere inequality scan");
  std::string ms_cfg, ms_out;
  ms->add_option("--config", ms_cfg, "JSON config path")->required();
  ms->add_option("--out", ms_out, "output JSON path (default stdout)");
  ms->callback([&] { run_ms_check(ms_cfg, ms_out); });

  // solve
  auto* sol = app.add_subcommand("solve", "Damped-Newton Dirichlet solve from a JSON config");
  std::string sol_cfg, sol_field, sol_report;
  sol->add_option("--config", sol_cfg, "JSON config path")->required();
  sol->add_option("--out-field", sol_field, "solution CSV path");
  sol->add_option("--out-report", sol_report, "report JSON path (default stdout)");
  sol->callback([&] { run_solve(sol_cfg, sol_field, sol_report); });

  // convergence
  auto* con = app.add_subcommand("convergence",
                                 "Solver convergence study against the Dirichlet family");
  std::string con_domain, con_grids{"17,33,65"}, con_init{"boundary_blend"}, con_out;
  double c_alpha{}, c_a{0}, c_b{1}, c_A{0}, c_B{0}, c_C{0}, con_tol{1e-10};
  int con_iters{50};
  con->add_option("--alpha", c_alpha)->required();
  con->add_option("--a", c_a);
  con->add_option("--b", c_b);
  con->add_option("--A", c_A);
  con->add_option("--B", c_B);
  con->add_option("--C", c_C);
  con->add_option("--domain", con_domain, "x_min,x_max,y_min,y_max")->required();
  con->add_option("--grids", con_grids, "comma-separated node counts");
  con->add_option("--init", con_init, "quadratic|boundary_blend")
      ->check(CLI::IsMember({"quadratic", "boundary_blend"}));
  con->add_option("--tol", con_tol, "Newton tolerance");
  con->add_option("--max-iters", con_iters);
  con->add_option("--out", con_out, "table JSON path (default stdout)");
  con->callback([&] {
    run_convergence(c_alpha, c_a, c_b, c_A, c_B, c_C, con_domain, con_grids, con_init, con_tol,
                    con_iters, con_out);
  });

  // sharpness
  auto* shp = app.add_subcommand("sharpness", "Blow-up lower bound for alpha <= -2");
  double s_alpha{}, s_C{1.0}, s_y{};
  std::string shp_out;
  shp->add_option("--alpha", s_alpha)->required();
  shp->add_option("--C", s_C, "comparison constant (default 1)");
  shp->add_option("--y", s_y, "height above the boundary")->required();
  shp->add_option("--out", shp_out, "output JSON path (default stdout)");
  shp->callback([&] {
    emit_json({{"alpha", s_alpha},
               {"C", s_C},
               {"y", s_y},
               {"bound", sharpness_lower_bound(s_alpha, s_C, s_y)}},
              shp_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "degma: " << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "degma: invalid JSON: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {  // invalid_argument, domain_error
    std::cerr << "degma: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {  // runtime/numerical failures
    std::cerr << "degma: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
