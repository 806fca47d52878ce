#include <doctest.h>

#include <cmath>

#include "liss/errors.hpp"
#include "liss/random.hpp"
#include "liss/system.hpp"

using namespace liss;

TEST_SUITE("system") {

TEST_CASE("chafee-infante roots and certificate") {
  const NonlinearSpec s = chafee_infante();
  CHECK(s.g(0.0) == 0.0);
  CHECK(s.g(1.0) == doctest::Approx(0.0));
  CHECK(s.g(-1.0) == doctest::Approx(0.0));
  CHECK(s.p == 4.0);
  CHECK(s.q == doctest::Approx(4.0 / 3.0));
  CHECK(s.alpha1 == 1.0);
  CHECK(s.alpha2 == 0.5);
  CHECK(s.kappa == 0.5);
  CHECK(s.lambda == 1.0);
}

TEST_CASE("chafee-infante kappa is the scan maximum of r^2 - r^4/2") {
  // Oracle for the certificate: maximize g(r) r + alpha2 |r|^4 over a dense
  // grid; the maximum is 1/2 at r = +-1, so kappa = 1/2 suffices (tight).
  double max_need = 0.0;
  double arg = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double r = -10.0 + 20.0 * i / 200000.0;
    const double need = (r * r - r * r * r * r) + 0.5 * r * r * r * r;
    if (need > max_need) {
      max_need = need;
      arg = r;
    }
  }
  CHECK(max_need == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(arg) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(validate_conditions(chafee_infante(), 10.0, 40001).pass);
}

TEST_CASE("chafee-infante derivative bound") {
  const NonlinearSpec s = chafee_infante();
  for (int i = 0; i <= 1000; ++i) {
    const double r = -5.0 + 10.0 * i / 1000.0;
    CHECK(s.g_prime(r) <= 1.0 + 1e-15);
  }
}

TEST_CASE("validate_conditions fails on an unstable g") {
  // g(r) = r: g(r) r = r^2 beats kappa - alpha2 r^p for large r.
  const NonlinearSpec bad = NonlinearSpec::make(
      [](double r) { return r; }, [](double) { return 1.0; }, 2.0, 2.0, 1.0,
      1.0, 1.0, 2.0);
  const ValidationReport rep = validate_conditions(bad, 10.0, 2001);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.upper_ok);
}

TEST_CASE("validate_conditions catches a wrong lambda") {
  NonlinearSpec s = chafee_infante();
  s.lambda = 0.5;  // g'(0) = 1 > 0.5
  const ValidationReport rep = validate_conditions(s, 2.0, 2001);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.derivative_ok);
  CHECK(rep.argmin_derivative == doctest::Approx(0.0).epsilon(1e-2));
}

TEST_CASE("odd_polynomial reproduces chafee-infante up to slack") {
  const NonlinearSpec s = odd_polynomial({0.0, 1.0, 0.0, -1.0});
  CHECK(s.p == 4.0);
  CHECK(s.alpha1 == doctest::Approx(1.0));
  CHECK(s.alpha2 == doctest::Approx(0.5));
  CHECK(s.kappa == doctest::Approx(0.5 * 1.05).epsilon(1e-3));
  CHECK(s.lambda == doctest::Approx(1.05).epsilon(1e-3));
  CHECK(validate_conditions(s, 10.0, 20001).pass);
}

TEST_CASE("odd_polynomial on -r^5") {
  const NonlinearSpec s = odd_polynomial({0.0, 0.0, 0.0, 0.0, 0.0, -1.0});
  CHECK(s.p == 6.0);
  CHECK(s.alpha1 > 0.0);
  CHECK(s.alpha2 > 0.0);
  // Oracle: g(r) r = -r^6, so the sandwich needs no kappa at all.
  CHECK(s.kappa <= 0.01);
  CHECK(validate_conditions(s, 10.0, 20001).pass);
}

TEST_CASE("odd_polynomial rejects bad shapes") {
  CHECK_THROWS_AS(odd_polynomial({0.0, 0.0, 0.0, 1.0}), Error);   // +r^3
  CHECK_THROWS_AS(odd_polynomial({1.0, 0.0, -1.0}), Error);       // even
  CHECK_THROWS_AS(odd_polynomial({}), Error);
}

TEST_CASE("one-sided Lipschitz property of a validated g") {
  // (g(r) - g(s))(r - s) <= lambda (r - s)^2 on sampled pairs.
  const NonlinearSpec s = chafee_infante();
  Rng rng(5, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const double r = rng.uniform(-3.0, 3.0);
    const double t = rng.uniform(-3.0, 3.0);
    CHECK((s.g(r) - s.g(t)) * (r - t) <=
          s.lambda * (r - t) * (r - t) + 1e-12);
  }
}

TEST_CASE("|g(r) r| bounded by kappa + alpha1 |r|^p") {
  const NonlinearSpec s = chafee_infante();
  for (int i = 0; i <= 4000; ++i) {
    const double r = -10.0 + 20.0 * i / 4000.0;
    CHECK(std::abs(s.g(r) * r) <=
          s.kappa + s.alpha1 * std::pow(std::abs(r), s.p) + 1e-9);
  }
}

TEST_CASE("control shape requires a nonzero profile") {
  const Grid g = Grid::make(4.0, 7);
  CHECK_THROWS_AS(ControlShape::make(StateVector::zeros(g)), Error);
  const ControlShape shape = ControlShape::eigenmode(g, 1);
  CHECK(shape.norm == doctest::Approx(1.0));
}

TEST_CASE("disturbance examples") {
  const Disturbance z = Disturbance::zero();
  CHECK(z.sup_norm() == 0.0);
  CHECK(z.eval(0.0) == 0.0);
  CHECK(z.eval(17.3) == 0.0);
  CHECK(z.is_zero());

  const Disturbance u = Disturbance::piecewise({0.0, 1.0}, {2.0, -3.0});
  CHECK(u.sup_norm() == 3.0);
  CHECK(u.eval(0.5) == 2.0);
  CHECK(u.eval(1.5) == -3.0);
  CHECK(u.eval(1.0) == -3.0);  // right-continuous

  const Disturbance tail = u.shift(1.0);
  CHECK(tail.sup_norm() == 3.0);
  CHECK(tail.eval(0.0) == -3.0);
  CHECK(tail.eval(100.0) == -3.0);
}

TEST_CASE("disturbance validation and negative time") {
  CHECK_THROWS_AS(Disturbance::piecewise({0.5}, {1.0}), Error);
  CHECK_THROWS_AS(Disturbance::piecewise({0.0, 0.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(Disturbance::piecewise({0.0}, {1.0, 2.0}), Error);
  const Disturbance u = Disturbance::constant(1.0);
  CHECK_THROWS_AS(u.eval(-0.1), Error);
  CHECK_THROWS_AS(u.shift(-1.0), Error);
}

TEST_CASE("shift never grows the sup norm") {
  Rng rng(9, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> bp{0.0};
    for (int i = 0; i < 4; ++i) bp.push_back(bp.back() + rng.uniform(0.1, 2.0));
    std::vector<double> vals;
    for (std::size_t i = 0; i < bp.size(); ++i)
      vals.push_back(rng.uniform(-5.0, 5.0));
    const Disturbance u = Disturbance::piecewise(bp, vals);
    const double tau = rng.uniform(0.0, 10.0);
    CHECK(u.shift(tau).sup_norm() <= u.sup_norm());
  }
}

TEST_CASE("shift matches pointwise evaluation") {
  const Disturbance u =
      Disturbance::piecewise({0.0, 0.5, 2.0, 3.0}, {1.0, -2.0, 0.5, 4.0});
  for (double tau : {0.0, 0.3, 0.5, 1.7, 2.5, 6.0}) {
    const Disturbance s = u.shift(tau);
    for (double t : {0.0, 0.1, 0.9, 1.4, 2.0, 3.5, 10.0})
      CHECK(s.eval(t) == u.eval(t + tau));
  }
}

}  // TEST_SUITE
