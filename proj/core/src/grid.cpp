#include "liss/grid.hpp"

#include <cmath>
#include <string>

#include "liss/errors.hpp"

namespace liss {

Grid Grid::make(double length, int interior_count) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error("grid: domain length must be positive, got " +
                std::to_string(length));
  if (interior_count < 1)
    throw Error("grid: interior node count must be >= 1, got " +
                std::to_string(interior_count));
  Grid g;
  g.length = length;
  g.interior_count = interior_count;
  g.spacing = length / static_cast<double>(interior_count + 1);
  return g;
}

StateVector StateVector::zeros(const Grid& g) {
  StateVector y;
  y.grid = g;
  y.values.assign(static_cast<std::size_t>(g.interior_count), 0.0);
  return y;
}

StateVector StateVector::from_values(const Grid& g, std::vector<double> values) {
  if (static_cast<int>(values.size()) != g.interior_count)
    throw Error("state: value count " + std::to_string(values.size()) +
                " does not match grid interior count " +
                std::to_string(g.interior_count));
  for (double v : values)
    if (!std::isfinite(v)) throw Error("state: non-finite entry");
  StateVector y;
  y.grid = g;
  y.values = std::move(values);
  return y;
}

namespace detail {
void require_bound(const Grid& g, const StateVector& y, const char* where) {
  if (!(y.grid == g))
    throw Error(std::string(where) + ": state is bound to a different grid");
}
}  // namespace detail

StateVector apply_laplacian(const Grid& g, const StateVector& y) {
  detail::require_bound(g, y, "apply_laplacian");
  const int n = g.interior_count;
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  StateVector out = StateVector::zeros(g);
  for (int i = 0; i < n; ++i) {
    const double left = (i > 0) ? y.values[i - 1] : 0.0;
    const double right = (i + 1 < n) ? y.values[i + 1] : 0.0;
    out.values[i] = (left - 2.0 * y.values[i] + right) * inv_h2;
  }
  return out;
}

double inner_product(const Grid& g, const StateVector& x, const StateVector& y) {
  detail::require_bound(g, x, "inner_product");
  detail::require_bound(g, y, "inner_product");
  double sum = 0.0;
  for (int i = 0; i < g.interior_count; ++i) sum += x.values[i] * y.values[i];
  return g.spacing * sum;
}

double l2_norm(const Grid& g, const StateVector& y) {
  detail::require_bound(g, y, "l2_norm");
  double sum = 0.0;
  for (double v : y.values) sum += v * v;
  return std::sqrt(g.spacing * sum);
}

double l2_distance(const Grid& g, const StateVector& x, const StateVector& y) {
  detail::require_bound(g, x, "l2_distance");
  detail::require_bound(g, y, "l2_distance");
  double sum = 0.0;
  for (int i = 0; i < g.interior_count; ++i) {
    const double d = x.values[i] - y.values[i];
    sum += d * d;
  }
  return std::sqrt(g.spacing * sum);
}

double max_abs(const StateVector& y) {
  double m = 0.0;
  for (double v : y.values) m = std::max(m, std::abs(v));
  return m;
}

StateVector add_scaled(const StateVector& x, double a, const StateVector& d) {
  detail::require_bound(x.grid, d, "add_scaled");
  StateVector out = x;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += a * d.values[i];
  return out;
}

EigenvaluePair smallest_eigenvalue(const Grid& g) {
  const double h = g.spacing;
  const double pi = 3.14159265358979323846;
  EigenvaluePair e;
  e.discrete = 2.0 / (h * h) * (1.0 - std::cos(pi * h / g.length));
  e.continuum = (pi / g.length) * (pi / g.length);
  return e;
}

StateVector eigenmode(const Grid& g, int k) {
  if (k < 1 || k > g.interior_count)
    throw Error("eigenmode: index out of range");
  const double pi = 3.14159265358979323846;
  StateVector y = StateVector::zeros(g);
  for (int i = 0; i < g.interior_count; ++i)
    y.values[i] = std::sin(static_cast<double>(k) * pi * g.node(i) / g.length);
  return y;
}

}  // namespace liss
