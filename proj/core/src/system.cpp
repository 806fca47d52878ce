#include "liss/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "liss/errors.hpp"

namespace liss {

namespace {

double horner(const std::vector<double>& c, double r) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * r + c[i];
  return acc;
}

std::vector<double> derivative_coeffs(const std::vector<double>& c) {
  std::vector<double> d;
  if (c.size() <= 1) {
    d.push_back(0.0);
    return d;
  }
  d.resize(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i)
    d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

}  // namespace

NonlinearSpec NonlinearSpec::make(std::function<double(double)> g,
                                  std::function<double(double)> g_prime,
                                  double p, double q, double alpha1,
                                  double alpha2, double kappa, double lambda,
                                  std::vector<double> coefficients) {
  if (!g || !g_prime) throw Error("nonlinearity: g and g' must be callable");
  if (!(p >= 2.0)) throw Error("nonlinearity: p must be >= 2");
  if (!(q > 1.0 && q <= 2.0)) throw Error("nonlinearity: q must lie in (1,2]");
  if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12)
    throw Error("nonlinearity: p and q are not dual exponents");
  if (!(alpha1 > 0.0 && alpha2 > 0.0 && kappa > 0.0 && lambda > 0.0))
    throw Error("nonlinearity: certificate constants must be positive");
  NonlinearSpec s;
  s.g = std::move(g);
  s.g_prime = std::move(g_prime);
  s.p = p;
  s.q = q;
  s.alpha1 = alpha1;
  s.alpha2 = alpha2;
  s.kappa = kappa;
  s.lambda = lambda;
  s.coefficients = std::move(coefficients);
  return s;
}

NonlinearSpec chafee_infante() {
  return NonlinearSpec::make(
      [](double r) { return r - r * r * r; },
      [](double r) { return 1.0 - 3.0 * r * r; }, 4.0, 4.0 / 3.0, 1.0, 0.5,
      0.5, 1.0, {0.0, 1.0, 0.0, -1.0});
}

NonlinearSpec zero_reaction() {
  return NonlinearSpec::make([](double) { return 0.0; },
                             [](double) { return 0.0; }, 2.0, 2.0, 1.0, 1.0,
                             1.0, 1.0, {0.0});
}

NonlinearSpec odd_polynomial(const std::vector<double>& coefficients,
                             double scan_range) {
  if (coefficients.empty())
    throw Error("odd_polynomial: empty coefficient list");
  std::size_t degree = coefficients.size() - 1;
  while (degree > 0 && coefficients[degree] == 0.0) --degree;
  if (degree < 1 || degree % 2 == 0)
    throw Error("odd_polynomial: degree must be odd, got " +
                std::to_string(degree));
  const double lead = coefficients[degree];
  if (!(lead < 0.0))
    throw Error("odd_polynomial: leading coefficient must be negative");
  if (!(scan_range > 0.0)) throw Error("odd_polynomial: bad scan range");

  std::vector<double> coeffs(coefficients.begin(),
                             coefficients.begin() + degree + 1);
  std::vector<double> dcoeffs = derivative_coeffs(coeffs);

  const double p = static_cast<double>(degree + 1);
  const double q = p / (p - 1.0);
  const double alpha1 = -lead;
  const double alpha2 = -lead / 2.0;

  // Grid scan for kappa and lambda; 5% inflation on both.
  const int samples = 40001;
  double kappa_need = 0.0;
  double lambda_need = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r =
        -scan_range + 2.0 * scan_range * static_cast<double>(i) /
                          static_cast<double>(samples - 1);
    const double gr = horner(coeffs, r) * r;
    const double rp = std::pow(std::abs(r), p);
    kappa_need = std::max(kappa_need, gr + alpha2 * rp);   // upper sandwich
    kappa_need = std::max(kappa_need, -gr - alpha1 * rp);  // lower sandwich
    lambda_need = std::max(lambda_need, horner(dcoeffs, r));
  }
  const double kappa = std::max(kappa_need * 1.05, 1e-9);
  const double lambda = std::max(lambda_need * 1.05, 1e-9);

  return NonlinearSpec::make(
      [coeffs](double r) { return horner(coeffs, r); },
      [dcoeffs](double r) { return horner(dcoeffs, r); }, p, q, alpha1, alpha2,
      kappa, lambda, coeffs);
}

ValidationReport validate_conditions(const NonlinearSpec& spec, double r_max,
                                     int n_samples) {
  if (!(r_max > 0.0)) throw Error("validate_conditions: r_max must be > 0");
  if (n_samples < 2) throw Error("validate_conditions: need >= 2 samples");

  ValidationReport rep;
  rep.r_max = r_max;
  rep.n_samples = n_samples;
  rep.min_slack_lower = rep.min_slack_upper = rep.min_slack_derivative =
      std::numeric_limits<double>::infinity();

  for (int i = 0; i < n_samples; ++i) {
    const double r = -r_max + 2.0 * r_max * static_cast<double>(i) /
                                  static_cast<double>(n_samples - 1);
    const double gr = spec.g(r) * r;
    const double rp = std::pow(std::abs(r), spec.p);
    const double slack_lower = gr - (-spec.kappa - spec.alpha1 * rp);
    const double slack_upper = (spec.kappa - spec.alpha2 * rp) - gr;
    const double slack_deriv = spec.lambda - spec.g_prime(r);
    if (slack_lower < rep.min_slack_lower) {
      rep.min_slack_lower = slack_lower;
      rep.argmin_lower = r;
    }
    if (slack_upper < rep.min_slack_upper) {
      rep.min_slack_upper = slack_upper;
      rep.argmin_upper = r;
    }
    if (slack_deriv < rep.min_slack_derivative) {
      rep.min_slack_derivative = slack_deriv;
      rep.argmin_derivative = r;
    }
  }
  rep.lower_ok = rep.min_slack_lower >= 0.0;
  rep.upper_ok = rep.min_slack_upper >= 0.0;
  rep.derivative_ok = rep.min_slack_derivative >= 0.0;
  rep.pass = rep.lower_ok && rep.upper_ok && rep.derivative_ok;
  return rep;
}

ControlShape ControlShape::make(StateVector profile) {
  ControlShape shape;
  shape.norm = l2_norm(profile.grid, profile);
  if (!(shape.norm > 0.0))
    throw Error("control shape: profile must have positive norm");
  shape.profile = std::move(profile);
  return shape;
}

ControlShape ControlShape::eigenmode(const Grid& g, int k) {
  StateVector mode = liss::eigenmode(g, k);
  const double norm = l2_norm(g, mode);
  for (double& v : mode.values) v /= norm;
  return make(std::move(mode));
}

namespace {
// Relative slack for breakpoint lookups; see class comment.
inline double break_slack(double t) {
  return 1e-12 * std::max(1.0, std::abs(t));
}
}  // namespace

Disturbance Disturbance::zero() { return constant(0.0); }

Disturbance Disturbance::constant(double value) {
  return piecewise({0.0}, {value});
}

Disturbance Disturbance::piecewise(std::vector<double> breakpoints,
                                   std::vector<double> values) {
  if (breakpoints.empty() || breakpoints.size() != values.size())
    throw Error("disturbance: need matching, nonempty breakpoint/value lists");
  if (breakpoints.front() != 0.0)
    throw Error("disturbance: first breakpoint must be 0");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i]) || !std::isfinite(values[i]))
      throw Error("disturbance: non-finite entry");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
      throw Error("disturbance: breakpoints must be strictly increasing");
  }
  Disturbance u;
  u.breaks_ = std::move(breakpoints);
  u.vals_ = std::move(values);
  for (double v : u.vals_) u.sup_ = std::max(u.sup_, std::abs(v));
  return u;
}

double Disturbance::eval(double t) const {
  if (t < 0.0) throw Error("disturbance: negative time");
  const double key = t + break_slack(t);
  std::size_t lo = 0;
  std::size_t hi = breaks_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (breaks_[mid] <= key)
      lo = mid;
    else
      hi = mid;
  }
  return vals_[lo];
}

Disturbance Disturbance::shift(double tau) const {
  if (tau < 0.0) throw Error("disturbance: negative shift");
  if (tau == 0.0) return *this;
  const double key = tau + break_slack(tau);
  std::size_t active = 0;
  while (active + 1 < breaks_.size() && breaks_[active + 1] <= key) ++active;
  std::vector<double> nb{0.0};
  std::vector<double> nv{vals_[active]};
  for (std::size_t i = active + 1; i < breaks_.size(); ++i) {
    nb.push_back(breaks_[i] - tau);
    nv.push_back(vals_[i]);
  }
  return piecewise(std::move(nb), std::move(nv));
}

}  // namespace liss
