#include "liss/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "liss/errors.hpp"
#include "liss/parallel.hpp"
#include "liss/random.hpp"
#include "liss/sampling.hpp"

namespace liss {

namespace {

/// Largest r in [opts.floor, cap] with condition(r) true; condition must be
/// monotone (true below, false above). Log-space bisection.
double bisect_radius(double cap, const RadiiOptions& opts,
                     const std::function<bool(double)>& condition,
                     const char* what) {
  if (condition(cap)) return cap;
  double lo = opts.floor;
  if (!condition(lo))
    throw Error(std::string("select_radii: empty certificate, ") + what +
                " infeasible down to the floor (construction too lossy "
                "at this r0)");
  double hi = cap;
  for (int i = 0; i < 300; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (condition(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

std::pair<double, double> select_radii(const BetaGamma& bg, double r0,
                                       RadiiOptions opts) {
  if (!(r0 > 0.0)) throw Error("select_radii: r0 must be positive");
  const double cap = (1.0 - opts.margin) * r0;
  const double r0x = bisect_radius(
      cap, opts, [&](double r) { return bg.beta(r, 0.0) < cap; },
      "beta(r, 0) < r0");
  const double r0u = bisect_radius(
      cap, opts, [&](double r) { return bg.gamma().eval(r) < cap; },
      "gamma(r) < r0");
  return {r0x, r0u};
}

bool membership_mu(const StateVector& x, const Disturbance& u,
                   const IssLyapunovData& data, const LyapunovOracle& oracle) {
  const double threshold = data.psi_upper.eval(data.chi.eval(u.sup_norm()));
  return oracle.v(x) <= threshold;
}

MuCheckResult check_invariance_mu(const LyapunovOracle& oracle,
                                  const IssLyapunovData& data,
                                  const Disturbance& u,
                                  const MuCheckOptions& opts) {
  const Stepper& st = oracle.stepper();
  const AttractorCloud& cloud = oracle.cloud();
  const Grid& g = st.grid();
  const double r0 = oracle.r0();
  const double unorm = u.sup_norm();

  MuCheckResult result;
  result.samples = opts.samples;
  result.threshold = data.psi_upper.eval(data.chi.eval(unorm));
  result.containment_bound = data.psi_lower.inverse().eval(result.threshold);
  result.excess_per_sample.assign(static_cast<std::size_t>(opts.samples),
                                  -std::numeric_limits<double>::infinity());

  std::vector<StateVector> accepted(static_cast<std::size_t>(opts.samples),
                                    StateVector::zeros(g));
  std::vector<double> initial_dist(static_cast<std::size_t>(opts.samples),
                                   0.0);
  std::vector<char> degenerate(static_cast<std::size_t>(opts.samples), 0);

  // Rejection sampling near the cloud; the perturbation radius halves on
  // every rejected attempt, so the draw terminates at an exact cloud point
  // in the worst case (V(theta) vanishes there).
  parallel_for(accepted.size(), opts.threads, [&](std::size_t j) {
    Rng rng(opts.seed, j);
    const StateVector& theta = cloud.points[rng.index(cloud.points.size())];
    const StateVector dir = scaled_to_norm(random_smooth_state(g, rng, 8), 1.0);
    double rho = rng.u01() * r0;
    for (int attempt = 0; attempt < opts.max_attempts_per_sample; ++attempt) {
      const StateVector x = add_scaled(theta, rho, dir);
      if (oracle.v(x) <= result.threshold) {
        accepted[j] = x;
        initial_dist[j] = dist_to_attractor(x, cloud);
        degenerate[j] = (attempt > 0 && rho < 1e-12) ? 1 : 0;
        return;
      }
      rho *= 0.5;
    }
    accepted[j] = theta;
    initial_dist[j] = 0.0;
    degenerate[j] = 1;
  });

  const long stride =
      std::max<long>(1, std::lround(opts.check_interval / st.dt()));
  std::vector<char> left_ball(accepted.size(), 0);

  parallel_for(accepted.size(), opts.threads, [&](std::size_t j) {
    // Collect checkpoints, then evaluate V at each.
    std::vector<StateVector> checkpoints;
    st.walk(accepted[j], 0.0, opts.horizon, u,
            [&](long k, double, const std::vector<double>& y) {
              if (k % stride != 0) return;
              StateVector s;
              s.grid = g;
              s.values = y;
              checkpoints.push_back(std::move(s));
            });
    double excess = -std::numeric_limits<double>::infinity();
    for (const auto& s : checkpoints) {
      if (dist_to_attractor(s, cloud) > r0) {
        left_ball[j] = 1;
        continue;
      }
      excess = std::max(excess, oracle.v(s) - result.threshold);
    }
    result.excess_per_sample[j] = excess;
  });

  for (std::size_t j = 0; j < accepted.size(); ++j) {
    result.max_excess = std::max(result.max_excess,
                                 result.excess_per_sample[j]);
    result.max_initial_dist =
        std::max(result.max_initial_dist, initial_dist[j]);
    if (result.excess_per_sample[j] > opts.tolerance) ++result.violations;
    if (left_ball[j]) result.stayed_in_ball = false;
  }
  result.sampling_degenerate =
      std::all_of(degenerate.begin(), degenerate.end(),
                  [](char c) { return c != 0; });
  return result;
}

namespace {

struct MarginScan {
  double margin = std::numeric_limits<double>::infinity();
  double worst_time = 0.0;
  double max_dist = 0.0;
  double max_amplitude = 0.0;
  double x0_dist = 0.0;
};

MarginScan scan_margin(const LyapunovOracle& oracle, const BetaGamma& bg,
                       const StateVector& x0, const Disturbance& u,
                       double horizon) {
  const Stepper& st = oracle.stepper();
  const AttractorCloud& cloud = oracle.cloud();
  MarginScan scan;
  scan.x0_dist = dist_to_attractor(x0, cloud);
  const double gamma_val = bg.gamma().eval(u.sup_norm());
  const MonotoneCurve psi_lower_inv = bg.psi_lower().inverse();
  DecayMarcher flow(bg.decay_curve(), bg.psi_upper().eval(scan.x0_dist));
  std::size_t hint = 0;
  st.walk(x0, 0.0, horizon, u,
          [&](long, double t, const std::vector<double>& y) {
            const double d = dist_to_attractor_hinted(y, cloud, hint);
            const double beta_t = psi_lower_inv.eval(flow.advance_to(t));
            const double m = beta_t + gamma_val - d;
            if (m < scan.margin) {
              scan.margin = m;
              scan.worst_time = t;
            }
            scan.max_dist = std::max(scan.max_dist, d);
            double amp = 0.0;
            for (double v : y) amp = std::max(amp, std::abs(v));
            scan.max_amplitude = std::max(scan.max_amplitude, amp);
          });
  return scan;
}

}  // namespace

std::pair<Certificate, FalsificationReport> certify_liss(
    const LyapunovOracle& oracle, const IssLyapunovData& data,
    const CertifyOptions& opts) {
  const Stepper& st = oracle.stepper();
  const AttractorCloud& cloud = oracle.cloud();
  const Grid& g = st.grid();

  const MonotoneCurve decay_curve =
      compose(data.alpha, data.psi_upper.inverse());
  BetaGamma bg = build_beta_gamma(data.psi_lower, data.psi_upper, data.chi,
                                  decay_curve);
  auto [r0x, r0u] = select_radii(bg, oracle.r0());
  if (opts.r0u_override) {
    // Overrides may only tighten; looser requests are clamped.
    r0u = std::min(r0u, *opts.r0u_override);
  }

  Certificate cert{std::move(bg), oracle.r0(), r0x, r0u, 0.0,
                   cloud.resolution, opts.seed};
  cert.tolerance = opts.tolerance >= 0.0
                       ? opts.tolerance
                       : 2.0 * cloud.resolution + 1e-3;

  FalsificationReport report;
  report.samples = opts.samples;
  report.tolerance = cert.tolerance;
  report.horizon = opts.horizon;
  report.seed = opts.seed;
  report.threads = opts.threads;
  report.outcomes.resize(static_cast<std::size_t>(opts.samples));

  parallel_for(report.outcomes.size(), opts.threads, [&](std::size_t i) {
    Rng rng(opts.seed, i);
    const StateVector& theta = cloud.points[rng.index(cloud.points.size())];
    const StateVector dir =
        scaled_to_norm(random_smooth_state(g, rng, opts.sample_modes), 1.0);
    const double rho = rng.u01() * cert.r0x;
    const StateVector x0 = add_scaled(theta, rho, dir);

    const int breaks = 1 + static_cast<int>(rng.index(
                               static_cast<std::size_t>(opts.max_breakpoints)));
    std::vector<double> bp{0.0};
    for (int b = 1; b < breaks; ++b) bp.push_back(rng.u01() * opts.horizon);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> uv;
    uv.reserve(bp.size());
    for (std::size_t b = 0; b < bp.size(); ++b)
      uv.push_back(rng.uniform(-cert.r0u, cert.r0u));
    const Disturbance u = Disturbance::piecewise(bp, uv);

    const MarginScan scan = scan_margin(oracle, cert.bg, x0, u, opts.horizon);

    SampleOutcome& out = report.outcomes[i];
    out.sample = i;
    out.x0_dist = scan.x0_dist;
    out.u_norm = u.sup_norm();
    out.margin = scan.margin;
    out.worst_time = scan.worst_time;
    out.max_dist = scan.max_dist;
    out.x0_values = x0.values;
    out.u_breakpoints = bp;
    out.u_values = uv;
  });

  report.min_margin = std::numeric_limits<double>::infinity();
  for (auto& out : report.outcomes) {
    report.min_margin = std::min(report.min_margin, out.margin);
    report.max_amplitude_observed = 0.0;  // filled below from violations scan
    if (out.margin < -cert.tolerance) report.violations.push_back(out);
  }
  double amp = 0.0;
  for (const auto& out : report.outcomes) amp = std::max(amp, out.max_dist);
  report.max_amplitude_observed = amp;
  // Keep full replay data only on violations.
  for (auto& out : report.outcomes) {
    if (out.margin < -cert.tolerance) continue;
    out.x0_values.clear();
    out.u_breakpoints.clear();
    out.u_values.clear();
  }

  MuCheckOptions mu_opts;
  mu_opts.samples = opts.mu_samples;
  mu_opts.horizon = opts.mu_horizon;
  mu_opts.tolerance = cert.tolerance;
  mu_opts.seed = opts.seed ^ 0x5DEECE66Dull;
  mu_opts.threads = opts.threads;
  const double mu_norm = opts.mu_u_norm >= 0.0 ? opts.mu_u_norm : cert.r0u;
  report.mu =
      check_invariance_mu(oracle, data, Disturbance::constant(mu_norm),
                          mu_opts);

  report.passed = report.violations.empty() && report.mu.violations == 0;
  return {std::move(cert), std::move(report)};
}

double replay_margin(const LyapunovOracle& oracle, const Certificate& cert,
                     const SampleOutcome& sample, double horizon) {
  if (sample.x0_values.empty())
    throw Error("replay: sample record has no persisted state");
  const StateVector x0 =
      StateVector::from_values(oracle.stepper().grid(), sample.x0_values);
  const Disturbance u =
      Disturbance::piecewise(sample.u_breakpoints, sample.u_values);
  return scan_margin(oracle, cert.bg, x0, u, horizon).margin;
}

}  // namespace liss
