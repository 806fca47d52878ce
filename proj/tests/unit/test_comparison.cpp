#include <doctest.h>

#include <cmath>

#include "liss/comparison.hpp"
#include "liss/errors.hpp"
#include "liss/random.hpp"

using namespace liss;

TEST_SUITE("comparison") {

TEST_CASE("make_curve interpolation") {
  const MonotoneCurve f = MonotoneCurve::make({{0.0, 0.0}, {1.0, 2.0}});
  CHECK(f.eval(0.5) == doctest::Approx(1.0));
  CHECK(f.eval(0.0) == 0.0);
  // extension by final slope
  CHECK(f.eval(3.0) == doctest::Approx(6.0));
}

TEST_CASE("identity curve") {
  const MonotoneCurve id = MonotoneCurve::identity(2.0);
  for (double r : {0.0, 0.4, 1.0, 5.0}) CHECK(id.eval(r) == doctest::Approx(r));
}

TEST_CASE("unordered knots rejected") {
  CHECK_THROWS_AS(
      MonotoneCurve::make({{0.0, 0.0}, {1.0, 1.0}, {0.5, 2.0}}), Error);
  CHECK_THROWS_AS(MonotoneCurve::make({{0.0, 0.0}, {1.0, 0.0}}), Error);
  CHECK_THROWS_AS(MonotoneCurve::make({{0.1, 0.0}, {1.0, 1.0}}), Error);
}

TEST_CASE("inversion is the coordinate swap") {
  const MonotoneCurve f = MonotoneCurve::linear(2.0, 4.0);
  CHECK(f.inverse().eval(1.0) == doctest::Approx(0.5));
  const MonotoneCurve id = MonotoneCurve::identity(1.0);
  CHECK(id.inverse().eval(0.7) == doctest::Approx(0.7));
  const MonotoneCurve g =
      MonotoneCurve::make({{0.0, 0.0}, {1.0, 2.0}, {3.0, 5.0}});
  CHECK(g.inverse().eval(5.0) == doctest::Approx(3.0));
  // invert(invert(f)) == f at knots
  const MonotoneCurve gg = g.inverse().inverse();
  for (std::size_t i = 0; i < g.knots().size(); ++i) {
    CHECK(gg.knots()[i].r == doctest::Approx(g.knots()[i].r).epsilon(1e-12));
    CHECK(gg.knots()[i].value ==
          doctest::Approx(g.knots()[i].value).epsilon(1e-12));
  }
}

TEST_CASE("composition laws") {
  const MonotoneCurve f = MonotoneCurve::linear(2.0, 1.0);
  const MonotoneCurve g = MonotoneCurve::linear(3.0, 1.0);
  const MonotoneCurve fg = compose(f, g);
  for (double r : {0.0, 0.2, 1.0, 7.0}) CHECK(fg.eval(r) == doctest::Approx(6.0 * r));

  const MonotoneCurve id = MonotoneCurve::identity(1.0);
  const MonotoneCurve idg = compose(id, g);
  for (double r : {0.0, 0.5, 2.0}) CHECK(idg.eval(r) == doctest::Approx(g.eval(r)));

  const MonotoneCurve h =
      MonotoneCurve::make({{0.0, 0.0}, {0.5, 0.2}, {1.0, 1.5}, {2.0, 4.0}});
  const MonotoneCurve round_trip = compose(h.inverse(), h);
  for (double r : {0.0, 0.1, 0.5, 0.9, 1.7, 3.0})
    CHECK(round_trip.eval(r) == doctest::Approx(r).epsilon(1e-10));
}

TEST_CASE("piecewise composition is exact between knots") {
  const MonotoneCurve f =
      MonotoneCurve::make({{0.0, 0.0}, {1.0, 3.0}, {2.0, 4.0}});
  const MonotoneCurve g =
      MonotoneCurve::make({{0.0, 0.0}, {0.5, 1.0}, {1.5, 2.5}});
  const MonotoneCurve fg = compose(f, g);
  Rng rng(1, 0);
  for (int i = 0; i < 200; ++i) {
    const double r = rng.uniform(0.0, 4.0);
    CHECK(fg.eval(r) == doctest::Approx(f.eval(g.eval(r))).epsilon(1e-12));
  }
}

TEST_CASE("class-K closure under inversion and composition") {
  Rng rng(2, 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MonotoneCurve::Knot> knots{{0.0, 0.0}};
    double r = 0.0, v = 0.0;
    for (int k = 0; k < 6; ++k) {
      r += rng.uniform(0.05, 1.0);
      v += rng.uniform(0.05, 2.0);
      knots.push_back({r, v});
    }
    const MonotoneCurve f = MonotoneCurve::make(knots);
    // both должны construct without violating the strict-increase invariant
    const MonotoneCurve fi = f.inverse();
    const MonotoneCurve ff = compose(f, fi);
    CHECK(ff.eval(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("solve_decay closed forms") {
  // A(v) = v: exact flow v0 e^{-t}.
  const MonotoneCurve lin = MonotoneCurve::linear(1.0, 10.0);
  CHECK(solve_decay(lin, 2.0, 1.5) ==
        doctest::Approx(2.0 * std::exp(-1.5)).epsilon(1e-8));
  CHECK(solve_decay(lin, 0.0, 3.0) == 0.0);
  CHECK(solve_decay(lin, 5.0, 0.0) == 5.0);

  // A(v) = v^2 approximated by a fine piecewise-linear curve on [0, 4]:
  // exact flow v0 / (1 + v0 t).
  std::vector<MonotoneCurve::Knot> quad{{0.0, 0.0}};
  for (int i = 1; i <= 400; ++i) {
    const double v = 4.0 * i / 400.0;
    quad.push_back({v, v * v});
  }
  const MonotoneCurve sq = MonotoneCurve::make(quad);
  const double got = solve_decay(sq, 2.0, 3.0);
  CHECK(got == doctest::Approx(2.0 / (1.0 + 2.0 * 3.0)).epsilon(1e-4));
}

TEST_CASE("solve_decay flow property") {
  const MonotoneCurve lin = MonotoneCurve::linear(0.7, 5.0);
  Rng rng(3, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const double v0 = rng.uniform(0.0, 4.0);
    const double s = rng.uniform(0.0, 2.0);
    const double t = rng.uniform(0.0, 2.0);
    const double direct = solve_decay(lin, v0, s + t);
    const double chained = solve_decay(lin, solve_decay(lin, v0, s), t);
    CHECK(direct == doctest::Approx(chained).epsilon(1e-8));
  }
}

TEST_CASE("solve_decay monotone in v0, non-increasing in t") {
  const MonotoneCurve A =
      MonotoneCurve::make({{0.0, 0.0}, {1.0, 0.5}, {3.0, 4.0}});
  double prev = solve_decay(A, 2.0, 0.0);
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const double v = solve_decay(A, 2.0, t);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  CHECK(solve_decay(A, 1.0, 1.0) <= solve_decay(A, 2.0, 1.0));
}

TEST_CASE("decay_path matches solve_decay") {
  const MonotoneCurve A = MonotoneCurve::linear(1.3, 2.0);
  std::vector<double> times{0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> path = decay_path(A, 3.0, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(path[i] ==
          doctest::Approx(solve_decay(A, 3.0, times[i])).epsilon(1e-7));
}

TEST_CASE("build_beta_gamma identity compositions") {
  const MonotoneCurve id = MonotoneCurve::identity(10.0);
  const MonotoneCurve lin = MonotoneCurve::linear(1.0, 10.0);
  const BetaGamma bg = build_beta_gamma(id, id, id, lin);
  // gamma = id
  for (double r : {0.0, 0.5, 2.0}) CHECK(bg.gamma().eval(r) == doctest::Approx(r));
  // beta(r, t) = r e^{-t}
  CHECK(bg.beta(2.0, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-7));
  CHECK(bg.beta(0.0, 5.0) == 0.0);
}

TEST_CASE("beta dominates identity at t=0 when psi_lower <= psi_upper") {
  const MonotoneCurve lower = MonotoneCurve::linear(0.5, 4.0);
  const MonotoneCurve upper = MonotoneCurve::linear(2.0, 4.0);
  const BetaGamma bg = build_beta_gamma(lower, upper, MonotoneCurve::identity(4.0),
                                        MonotoneCurve::linear(1.0, 10.0));
  for (double r : {0.1, 0.5, 1.0, 3.0}) CHECK(bg.beta(r, 0.0) >= r);
}

TEST_CASE("beta is class KL") {
  const MonotoneCurve lower =
      MonotoneCurve::make({{0.0, 0.0}, {0.5, 0.1}, {2.0, 1.0}});
  const MonotoneCurve upper =
      MonotoneCurve::make({{0.0, 0.0}, {1.0, 3.0}, {2.0, 7.0}});
  const BetaGamma bg =
      build_beta_gamma(lower, upper, MonotoneCurve::identity(2.0),
                       MonotoneCurve::linear(0.8, 10.0));
  // class K in r for fixed t
  for (double t : {0.0, 0.7, 2.0}) {
    double prev = 0.0;
    for (double r : {0.2, 0.5, 1.0, 1.8}) {
      const double b = bg.beta(r, t);
      CHECK(b > prev);
      prev = b;
    }
  }
  // strictly decreasing to 0 in t for fixed r
  double prev = bg.beta(1.0, 0.0);
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double b = bg.beta(1.0, t);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(bg.beta(1.0, 60.0) < 1e-6);
}

}  // TEST_SUITE
