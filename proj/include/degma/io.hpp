#pragma once

// Serialization for grid fields and reports.
//
// CSV format: header line `x,y,value`, one node per row in row-major order
// with y as the outer loop, floats printed with %.17g so doubles round-trip
// losslessly. The reader infers the grid from the node pattern and rejects
// files that are not uniform rectangular sweeps in that order.
//
// JSON format: {"spec": {x_min, x_max, y_min, y_max, nx, ny}, "values":
// [...]} with the same ordering.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "degma/core.hpp"
#include "degma/ma_solver.hpp"

namespace degma {

/// %.17g rendering (shortest text that still recovers the exact double).
inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(const scalar_field& f, std::ostream& os) {
  const grid_spec& s = f.spec();
  os << "x,y,value\n";
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i)
      os << fmt17(s.x(i)) << ',' << fmt17(s.y(j)) << ',' << fmt17(f(i, j)) << '\n';
}

inline void write_csv_file(const scalar_field& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(f, os);
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline scalar_field read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
  // Tolerate a UTF-8 BOM and trailing CR.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,value")
    throw std::invalid_argument("csv: expected header 'x,y,value', got '" + line + "'");

  std::vector<double> xs, ys, vs;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double x, y, v;
    char extra;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf %c", &x, &y, &v, &extra) != 3)
      throw std::invalid_argument("csv: malformed row at line " + std::to_string(lineno));
    xs.push_back(x);
    ys.push_back(y);
    vs.push_back(v);
  }
  if (xs.empty()) throw std::invalid_argument("csv: no data rows");

  std::size_t nx = 1;
  while (nx < xs.size() && ys[nx] == ys[0]) ++nx;
  if (xs.size() % nx != 0)
    throw std::invalid_argument("csv: row count is not a multiple of the inferred nx=" +
                                std::to_string(nx));
  const std::size_t ny = xs.size() / nx;
  if (nx < 3 || ny < 3) throw std::invalid_argument("csv: grid too small (need nx, ny >= 3)");

  grid_spec spec(xs[0], xs[nx - 1], ys[0], ys.back(), static_cast<int>(nx),
                 static_cast<int>(ny));
  const double tx = 1e-9 * (1.0 + std::abs(spec.x_max - spec.x_min));
  const double ty = 1e-9 * (1.0 + std::abs(spec.y_max - spec.y_min));
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
    if (std::abs(xs[k] - spec.x(i)) > tx || std::abs(ys[k] - spec.y(j)) > ty)
      throw std::invalid_argument("csv: node " + std::to_string(k + 2) +
                                  " does not follow a uniform row-major sweep");
  }
  return scalar_field(spec, std::move(vs));
}

inline scalar_field read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open for reading: " + path);
  return read_csv(is);
}

inline nlohmann::json grid_to_json(const grid_spec& s) {
  return {{"x_min", s.x_min}, {"x_max", s.x_max}, {"y_min", s.y_min},
          {"y_max", s.y_max}, {"nx", s.nx},       {"ny", s.ny}};
}

inline grid_spec grid_from_json(const nlohmann::json& j) {
  return grid_spec(j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                   j.at("y_min").get<double>(), j.at("y_max").get<double>(),
                   j.at("nx").get<int>(), j.at("ny").get<int>());
}

inline nlohmann::json field_to_json(const scalar_field& f) {
  return {{"spec", grid_to_json(f.spec())},
          {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

inline scalar_field field_from_json(const nlohmann::json& j) {
  return scalar_field(grid_from_json(j.at("spec")), j.at("values").get<std::vector<double>>());
}

inline nlohmann::json report_to_json(const residual_report& r) {
  return {{"max_abs", r.max_abs},
          {"mean_abs", r.mean_abs},
          {"argmax", {{"x", r.argmax_x}, {"y", r.argmax_y}}},
          {"n_evaluated", r.n_evaluated}};
}

inline nlohmann::json solve_report_to_json(const solve_report& r) {
  return {{"iterations", r.iterations},
          {"final_residual", r.final_residual},
          {"converged", r.converged},
          {"convexity_violations", r.convexity_violations},
          {"residual_history", r.residual_history}};
}

inline void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace degma
