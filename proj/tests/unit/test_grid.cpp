#include <doctest.h>

#include <cmath>

#include "liss/errors.hpp"
#include "liss/grid.hpp"
#include "liss/random.hpp"
#include "liss/sampling.hpp"

using namespace liss;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("grid") {

TEST_CASE("build_grid basic geometry") {
  const Grid g = Grid::make(4.0, 3);
  CHECK(g.spacing == doctest::Approx(1.0));
  CHECK(g.node(0) == doctest::Approx(1.0));
  CHECK(g.node(1) == doctest::Approx(2.0));
  CHECK(g.node(2) == doctest::Approx(3.0));
  // h (n+1) = L up to rounding
  CHECK(g.spacing * (g.interior_count + 1) == doctest::Approx(g.length));
}

TEST_CASE("build_grid rejects bad arguments") {
  CHECK_THROWS_AS(Grid::make(1.0, 0), Error);
  CHECK_THROWS_AS(Grid::make(0.0, 8), Error);
  CHECK_THROWS_AS(Grid::make(-2.0, 8), Error);
}

TEST_CASE("smallest eigenvalue converges to the continuum value") {
  const Grid coarse = Grid::make(kPi, 9);
  const Grid fine = Grid::make(kPi, 9999);
  CHECK(smallest_eigenvalue(coarse).continuum == doctest::Approx(1.0));
  CHECK(smallest_eigenvalue(Grid::make(2.0 * kPi, 9)).continuum ==
        doctest::Approx(0.25));
  // 0 < omega_h < (pi/L)^2, omega_h -> (pi/L)^2
  const double wc = smallest_eigenvalue(coarse).discrete;
  const double wf = smallest_eigenvalue(fine).discrete;
  CHECK(wc > 0.0);
  CHECK(wc < 1.0);
  CHECK(wf > wc);
  CHECK(wf == doctest::Approx(1.0).epsilon(1e-6));

  const Grid g99 = Grid::make(kPi, 99);
  const double w99 = smallest_eigenvalue(g99).discrete;
  CHECK(w99 > 0.999);
  CHECK(w99 < 1.0);
}

TEST_CASE("laplacian stencil on a hat vector") {
  const Grid g = Grid::make(4.0, 3);
  const StateVector y = StateVector::from_values(g, {1.0, 2.0, 1.0});
  const StateVector lap = apply_laplacian(g, y);
  CHECK(lap.values[0] == doctest::Approx(0.0));
  CHECK(lap.values[1] == doctest::Approx(-2.0));
  CHECK(lap.values[2] == doctest::Approx(0.0));
}

TEST_CASE("laplacian of zero is zero") {
  const Grid g = Grid::make(4.0, 3);
  const StateVector lap = apply_laplacian(g, StateVector::zeros(g));
  for (double v : lap.values) CHECK(v == 0.0);
}

TEST_CASE("first eigenmode is a discrete eigenvector") {
  const Grid g = Grid::make(2.0 * kPi, 128);
  const StateVector mode = eigenmode(g, 1);
  const StateVector lap = apply_laplacian(g, mode);
  const double omega = smallest_eigenvalue(g).discrete;
  for (int i = 0; i < g.interior_count; ++i)
    CHECK(lap.values[i] ==
          doctest::Approx(-omega * mode.values[i]).epsilon(1e-12));
}

TEST_CASE("grid mismatch rejected") {
  const Grid a = Grid::make(4.0, 3);
  const Grid b = Grid::make(5.0, 3);
  const StateVector y = StateVector::zeros(b);
  CHECK_THROWS_AS(apply_laplacian(a, y), Error);
  CHECK_THROWS_AS(l2_norm(a, y), Error);
}

TEST_CASE("l2 norm examples") {
  const Grid g = Grid::make(4.0, 3);
  CHECK(l2_norm(g, StateVector::zeros(g)) == 0.0);
  const StateVector y = StateVector::from_values(g, {1.0, 2.0, 1.0});
  CHECK(l2_norm(g, y) == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("l2 norm of the sine mode approaches sqrt(L/2)") {
  const Grid g = Grid::make(3.0, 1000);
  const double norm = l2_norm(g, eigenmode(g, 1));
  // Oracle: integral of sin^2(pi z / L) over (0, L) is L/2.
  CHECK(norm == doctest::Approx(std::sqrt(3.0 / 2.0)).epsilon(1e-3));
}

TEST_CASE("laplacian linearity on random vectors") {
  const Grid g = Grid::make(5.0, 64);
  Rng rng(42, 0);
  for (int trial = 0; trial < 20; ++trial) {
    StateVector x = StateVector::zeros(g);
    StateVector y = StateVector::zeros(g);
    for (int i = 0; i < g.interior_count; ++i) {
      x.values[i] = rng.normal();
      y.values[i] = rng.normal();
    }
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    const StateVector combo = add_scaled(
        [&] {
          StateVector s = x;
          for (double& v : s.values) v *= a;
          return s;
        }(),
        b, y);
    const StateVector lhs = apply_laplacian(g, combo);
    const StateVector lx = apply_laplacian(g, x);
    const StateVector ly = apply_laplacian(g, y);
    for (int i = 0; i < g.interior_count; ++i) {
      const double rhs = a * lx.values[i] + b * ly.values[i];
      CHECK(lhs.values[i] ==
            doctest::Approx(rhs).epsilon(1e-12).scale(std::abs(rhs) + 1.0));
    }
  }
}

TEST_CASE("laplacian is negative semidefinite with Poincare constant") {
  const Grid g = Grid::make(7.0, 48);
  const double omega = smallest_eigenvalue(g).discrete;
  Rng rng(7, 0);
  for (int trial = 0; trial < 50; ++trial) {
    StateVector y = StateVector::zeros(g);
    for (int i = 0; i < g.interior_count; ++i) y.values[i] = rng.normal();
    const double quad = inner_product(g, apply_laplacian(g, y), y);
    const double norm2 = inner_product(g, y, y);
    CHECK(quad <= -omega * norm2 * (1.0 - 1e-12));
  }
}

TEST_CASE("reversing a state reverses its laplacian") {
  const Grid g = Grid::make(3.0, 17);
  Rng rng(11, 0);
  StateVector y = StateVector::zeros(g);
  for (int i = 0; i < g.interior_count; ++i) y.values[i] = rng.normal();
  StateVector rev = y;
  std::reverse(rev.values.begin(), rev.values.end());
  StateVector lap_rev = apply_laplacian(g, rev);
  StateVector lap = apply_laplacian(g, y);
  std::reverse(lap.values.begin(), lap.values.end());
  for (int i = 0; i < g.interior_count; ++i)
    CHECK(lap_rev.values[i] == doctest::Approx(lap.values[i]));
}

TEST_CASE("norm is 1-Lipschitz") {
  const Grid g = Grid::make(2.0, 32);
  Rng rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    StateVector x = random_smooth_state(g, rng);
    StateVector y = random_smooth_state(g, rng);
    CHECK(std::abs(l2_norm(g, x) - l2_norm(g, y)) <=
          l2_distance(g, x, y) + 1e-14);
  }
}

}  // TEST_SUITE
