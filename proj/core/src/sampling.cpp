#include "liss/sampling.hpp"

#include <cmath>

namespace liss {

StateVector random_smooth_state(const Grid& g, Rng& rng, int modes) {
  const int m_count = std::min(modes, g.interior_count);
  StateVector y = StateVector::zeros(g);
  const double pi = 3.14159265358979323846;
  for (int m = 1; m <= m_count; ++m) {
    const double coeff = rng.normal() / static_cast<double>(m);
    const double freq = static_cast<double>(m) * pi / g.length;
    for (int i = 0; i < g.interior_count; ++i)
      y.values[i] += coeff * std::sin(freq * g.node(i));
  }
  return y;
}

StateVector scaled_to_norm(StateVector y, double target) {
  if (target == 0.0) {
    for (double& v : y.values) v = 0.0;
    return y;
  }
  const double norm = l2_norm(y.grid, y);
  if (norm == 0.0) {
    // Degenerate draw; fall back to the first eigenmode shape.
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < y.grid.interior_count; ++i)
      y.values[i] = std::sin(pi * y.grid.node(i) / y.grid.length);
    return scaled_to_norm(std::move(y), target);
  }
  const double factor = target / norm;
  for (double& v : y.values) v *= factor;
  return y;
}

}  // namespace liss
