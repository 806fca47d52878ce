#include "liss/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "liss/errors.hpp"

namespace liss {

double eta(double eps, double r) {
  if (!(eps > 0.0)) throw Error("eta: eps must be positive");
  return std::max(0.0, r - eps);
}

double time_to_shrink(const KLEnvelope& envelope, double r0, double eps) {
  if (!(r0 > 0.0) || !(eps > 0.0))
    throw Error("time_to_shrink: r0 and eps must be positive");
  const double amp = envelope.amplitude.eval(r0);
  if (amp <= eps) return 0.0;
  return std::log(amp / eps) / envelope.rate;
}

LyapunovOracle::LyapunovOracle(const Stepper& st, const AttractorCloud& cloud,
                               const KLEnvelope& envelope, LyapunovOptions opts)
    : stepper_(st), cloud_(cloud), envelope_(envelope), opts_(opts) {
  if (!(opts_.c0 > 0.0)) throw Error("lyapunov: c0 must be positive");
  if (opts_.truncation < 1) throw Error("lyapunov: truncation must be >= 1");
  if (opts_.psi_terms < opts_.truncation)
    throw Error("lyapunov: psi_terms must be >= truncation");
  if (!(opts_.r0 > 0.0)) throw Error("lyapunov: r0 must be positive");
  shrink_times_.resize(static_cast<std::size_t>(opts_.truncation));
  for (int k = 1; k <= opts_.truncation; ++k)
    shrink_times_[static_cast<std::size_t>(k - 1)] =
        time_to_shrink(envelope_, opts_.r0, 1.0 / static_cast<double>(k));
  tail_bound_ = std::ldexp(envelope_.eval(opts_.r0, 0.0), -opts_.truncation);
}

double LyapunovOracle::weighted_eta_sup(std::span<const double> times,
                                        std::span<const double> dists,
                                        double eps, double c0, double t_max) {
  double sup = 0.0;
  for (std::size_t i = 0; i < times.size() && times[i] <= t_max; ++i)
    sup = std::max(sup, std::exp(c0 * times[i]) * eta(eps, dists[i]));
  return sup;
}

double LyapunovOracle::require_in_ball(const StateVector& x) const {
  const double d0 = dist_to_attractor(x, cloud_);
  if (d0 > opts_.r0 * (1.0 + 1e-9))
    throw Error("lyapunov: state outside the r0-ball, dist = " +
                std::to_string(d0));
  return d0;
}

double LyapunovOracle::v_eps(const StateVector& x, double eps) const {
  require_in_ball(x);
  const double T = time_to_shrink(envelope_, opts_.r0, eps);
  const double dt = stepper_.dt();
  const double horizon = std::ceil(T / dt) * dt;
  const double cutoff = T + 0.5 * dt;
  double sup = 0.0;
  std::size_t hint = 0;
  stepper_.walk(x, 0.0, horizon, Disturbance::zero(),
                [&](long, double t, const std::vector<double>& y) {
                  if (t > cutoff) return;
                  const double d = dist_to_attractor_hinted(y, cloud_, hint);
                  sup = std::max(sup, std::exp(opts_.c0 * t) * eta(eps, d));
                });
  return std::exp(-(lambda() + opts_.c0) * T) * sup;
}

double LyapunovOracle::v(const StateVector& x) const {
  require_in_ball(x);
  const int K = opts_.truncation;
  const double dt = stepper_.dt();
  const double t_max = shrink_times_.back();
  const double horizon = std::ceil(t_max / dt) * dt;

  std::vector<double> sup(static_cast<std::size_t>(K), 0.0);
  std::size_t hint = 0;
  stepper_.walk(x, 0.0, horizon, Disturbance::zero(),
                [&](long, double t, const std::vector<double>& y) {
                  if (t > t_max + 0.5 * dt) return;
                  const double d = dist_to_attractor_hinted(y, cloud_, hint);
                  const double ec = std::exp(opts_.c0 * t);
                  for (int k = 1; k <= K; ++k) {
                    if (t > shrink_times_[static_cast<std::size_t>(k - 1)] +
                                0.5 * dt)
                      continue;
                    const double term = ec * eta(1.0 / k, d);
                    auto& slot = sup[static_cast<std::size_t>(k - 1)];
                    slot = std::max(slot, term);
                  }
                });

  double value = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double T = shrink_times_[static_cast<std::size_t>(k - 1)];
    value += std::ldexp(1.0, -k) * std::exp(-(lambda() + opts_.c0) * T) *
             sup[static_cast<std::size_t>(k - 1)];
  }
  return value;
}

IssLyapunovData LyapunovOracle::comparison_data() const {
  IssLyapunovData data;
  data.c0 = opts_.c0;
  data.lambda = lambda();
  data.control_norm = stepper_.shape().norm;
  data.psi_terms = opts_.psi_terms;

  // psi_lower(r) = sum_{k=1..K_psi} 2^{-k} e^{-(lambda+c0) T(1/k)} eta_{1/k}(r)
  // is piecewise linear with breakpoints at r = 1/k; evaluate it exactly at
  // its breakpoints. The chord from (0,0) to the first positive knot keeps
  // the curve strictly increasing where the truncated sum vanishes.
  const int Kp = opts_.psi_terms;
  std::vector<double> weight(static_cast<std::size_t>(Kp + 1), 0.0);
  for (int k = 1; k <= Kp; ++k) {
    const double T = time_to_shrink(envelope_, opts_.r0, 1.0 / k);
    weight[static_cast<std::size_t>(k)] =
        std::ldexp(1.0, -k) * std::exp(-(data.lambda + data.c0) * T);
  }
  auto psi_lower_at = [&](double r) {
    double s = 0.0;
    for (int k = 1; k <= Kp; ++k)
      s += weight[static_cast<std::size_t>(k)] * std::max(0.0, r - 1.0 / k);
    return s;
  };
  std::vector<MonotoneCurve::Knot> lower_knots{{0.0, 0.0}};
  for (int k = Kp - 1; k >= 1; --k) {
    const double r = 1.0 / static_cast<double>(k);
    lower_knots.push_back({r, psi_lower_at(r)});
  }
  if (opts_.r_max > 1.0)
    lower_knots.push_back({opts_.r_max, psi_lower_at(opts_.r_max)});
  lower_knots = detail::sanitize_knots(std::move(lower_knots));
  if (lower_knots.size() < 2 || !(lower_knots.back().value > 0.0))
    throw NumericsError(
        "psi_lower underflowed to zero; envelope decay rate too small");
  data.psi_lower = MonotoneCurve::make(std::move(lower_knots));

  // psi_upper(r) = beta0(r, 0) + r, exact on the amplitude knots.
  std::vector<MonotoneCurve::Knot> upper_knots;
  for (const auto& k : envelope_.amplitude.knots())
    upper_knots.push_back({k.r, k.value + k.r});
  if (upper_knots.back().r < opts_.r_max)
    upper_knots.push_back(
        {opts_.r_max, envelope_.amplitude.eval(opts_.r_max) + opts_.r_max});
  data.psi_upper = MonotoneCurve::make(std::move(upper_knots));

  data.alpha0 = data.psi_lower.scaled(data.c0);
  data.sigma0 = MonotoneCurve::linear(
      2.0 * std::exp(2.0 * data.lambda) * data.control_norm, 1.0);
  data.chi = compose(data.alpha0.inverse(), data.sigma0.scaled(2.0));
  data.alpha = data.alpha0.scaled(0.5);
  return data;
}

DiniEstimate LyapunovOracle::dini_estimate(const StateVector& x,
                                           const Disturbance& u) const {
  const double v0 = v(x);
  const double dt = stepper_.dt();

  std::vector<StateVector> rungs;
  stepper_.walk(x, 0.0, 4.0 * dt, u,
                [&](long k, double, const std::vector<double>& y) {
                  if (k == 1 || k == 2 || k == 4) {
                    StateVector s;
                    s.grid = stepper_.grid();
                    s.values = y;
                    rungs.push_back(std::move(s));
                  }
                });

  DiniEstimate est;
  est.value = -std::numeric_limits<double>::infinity();
  bool any = false;
  const double steps_of[3] = {1.0, 2.0, 4.0};
  for (std::size_t m = 0; m < rungs.size(); ++m) {
    if (dist_to_attractor(rungs[m], cloud_) > opts_.r0) {
      est.exited_ball = true;
      continue;
    }
    const double quotient = (v(rungs[m]) - v0) / (steps_of[m] * dt);
    est.value = std::max(est.value, quotient);
    any = true;
  }
  if (!any)
    throw Error("dini_estimate: trajectory left the r0-ball on every rung");
  return est;
}

}  // namespace liss
