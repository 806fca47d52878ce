#pragma once

#include <vector>

namespace liss {

/// Uniform grid for the interval (0, L) with homogeneous Dirichlet
/// boundary conditions. Only the n interior nodes carry unknowns; the
/// boundary values are identically zero.
struct Grid {
  double length = 0.0;     // L
  int interior_count = 0;  // n
  double spacing = 0.0;    // h = L / (n + 1)

  static Grid make(double length, int interior_count);

  /// Interior node i in [0, n): zeta_i = (i + 1) h.
  double node(int i) const { return spacing * static_cast<double>(i + 1); }

  bool operator==(const Grid&) const = default;
};

/// Discrete L2(0, L) element: values at the interior nodes of one grid.
struct StateVector {
  Grid grid;
  std::vector<double> values;

  static StateVector zeros(const Grid& g);
  static StateVector from_values(const Grid& g, std::vector<double> values);

  int size() const { return static_cast<int>(values.size()); }
};

/// Second-order central stencil with zero boundary values.
StateVector apply_laplacian(const Grid& g, const StateVector& y);

/// Discrete inner product h * sum(x_i * y_i).
double inner_product(const Grid& g, const StateVector& x, const StateVector& y);

/// sqrt(h * sum(y_i^2)); the discrete L2 norm.
double l2_norm(const Grid& g, const StateVector& y);

double l2_distance(const Grid& g, const StateVector& x, const StateVector& y);

double max_abs(const StateVector& y);

/// x + a * d (same grid).
StateVector add_scaled(const StateVector& x, double a, const StateVector& d);

struct EigenvaluePair {
  double discrete;   // (2/h^2) (1 - cos(pi h / L))
  double continuum;  // (pi / L)^2
};

/// Smallest eigenvalue of the negative Dirichlet Laplacian, discrete
/// stencil value and continuum limit.
EigenvaluePair smallest_eigenvalue(const Grid& g);

/// k-th Dirichlet mode sin(k pi zeta / L) sampled at interior nodes
/// (unnormalized). Discrete eigenvector of the stencil.
StateVector eigenmode(const Grid& g, int k);

namespace detail {
void require_bound(const Grid& g, const StateVector& y, const char* where);
}

}  // namespace liss
