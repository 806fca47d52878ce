#include "liss/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liss/errors.hpp"
#include "liss/parallel.hpp"
#include "liss/random.hpp"
#include "liss/sampling.hpp"

namespace liss {

namespace {

double dist_squared_sum(const std::vector<double>& a,
                        const std::vector<double>& b, double abandon_above) {
  double sum = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
    if (sum > abandon_above) return sum;
  }
  return sum;
}

}  // namespace

double dist_to_attractor_hinted(const std::vector<double>& y,
                                const AttractorCloud& cloud,
                                std::size_t& hint) {
  if (cloud.points.empty()) throw Error("attractor cloud is empty");
  if (hint >= cloud.points.size()) hint = 0;
  double best = dist_squared_sum(y, cloud.points[hint].values, 1e300);
  std::size_t best_idx = hint;
  for (std::size_t j = 0; j < cloud.points.size(); ++j) {
    if (j == hint) continue;
    const double s = dist_squared_sum(y, cloud.points[j].values, best);
    if (s < best) {
      best = s;
      best_idx = j;
    }
  }
  hint = best_idx;
  return std::sqrt(cloud.grid.spacing * best);
}

double dist_to_attractor(const StateVector& x, const AttractorCloud& cloud) {
  detail::require_bound(cloud.grid, x, "dist_to_attractor");
  std::size_t hint = 0;
  return dist_to_attractor_hinted(x.values, cloud, hint);
}

double hausdorff_distance(const Grid& g, const std::vector<StateVector>& a,
                          const std::vector<StateVector>& b) {
  if (a.empty() || b.empty()) throw Error("hausdorff: empty family");
  auto directed = [&](const std::vector<StateVector>& from,
                      const std::vector<StateVector>& to) {
    double sup = 0.0;
    for (const auto& x : from) {
      double best = 1e300;
      for (const auto& y : to)
        best = std::min(best,
                        dist_squared_sum(x.values, y.values, best));
      sup = std::max(sup, best);
    }
    return std::sqrt(g.spacing * sup);
  };
  return std::max(directed(a, b), directed(b, a));
}

AttractorCloud approximate_attractor(const Stepper& st,
                                     const AttractorOptions& opts) {
  if (opts.ensemble < 1) throw Error("attractor: ensemble must be >= 1");
  if (!(opts.radius >= 0.0)) throw Error("attractor: radius must be >= 0");
  if (!(opts.delta_target > 0.0))
    throw Error("attractor: delta_target must be > 0");

  const Grid& g = st.grid();
  const NonlinearSpec& spec = st.reaction();
  const double omega = smallest_eigenvalue(g).discrete;
  // Absorbing ball from the dissipative estimate, inflated by 2:
  // ||x||^2 <= 2 kappa |Omega| / omega.
  const double absorb = std::sqrt(2.0 * spec.kappa * g.length / omega);
  const double radius = std::min(opts.radius, absorb);

  // Norm-stratified ensemble: member 0 sits at the origin, the rest cover
  // (0, radius] evenly with random smooth directions.
  std::vector<StateVector> members(static_cast<std::size_t>(opts.ensemble),
                                   StateVector::zeros(g));
  for (int j = 0; j < opts.ensemble; ++j) {
    Rng rng(opts.seed, static_cast<std::uint64_t>(j));
    const double norm =
        opts.ensemble == 1
            ? radius
            : radius * static_cast<double>(j) /
                  static_cast<double>(opts.ensemble - 1);
    members[static_cast<std::size_t>(j)] =
        scaled_to_norm(random_smooth_state(g, rng, opts.sample_modes), norm);
  }

  const Disturbance none = Disturbance::zero();
  auto advance_all = [&](double from, double to) {
    parallel_for(members.size(), opts.threads, [&](std::size_t j) {
      members[j] = st.evolve_state(members[j], from, to, none);
    });
  };

  advance_all(0.0, opts.burn_in);

  std::vector<StateVector> prev = members;
  double gap = 0.0;
  int generations = 0;
  bool converged = false;
  double t_now = opts.burn_in;
  for (int m = 1; m <= opts.max_generations; ++m) {
    advance_all(t_now, t_now + opts.snapshot_interval);
    t_now += opts.snapshot_interval;
    gap = hausdorff_distance(g, prev, members);
    generations = m;
    if (gap <= opts.delta_target) {
      converged = true;
      break;
    }
    prev = members;
  }
  if (!converged)
    throw NumericsError(
        "attractor iteration did not converge within " +
        std::to_string(opts.max_generations) +
        " generations; last Hausdorff gap = " + std::to_string(gap));

  // Deduplicate the final generation at delta_target/2 spacing.
  AttractorCloud cloud;
  cloud.grid = g;
  cloud.resolution = std::max(gap, 1e-12);
  cloud.burn_in = opts.burn_in;
  cloud.snapshot_interval = opts.snapshot_interval;
  cloud.ensemble = opts.ensemble;
  cloud.radius = opts.radius;
  cloud.seed = opts.seed;
  cloud.generations_used = generations;
  const double dedup = opts.delta_target / 2.0;
  for (const auto& x : members) {
    bool fresh = true;
    for (const auto& kept : cloud.points)
      if (l2_distance(g, x, kept) <= dedup) {
        fresh = false;
        break;
      }
    if (fresh) cloud.points.push_back(x);
  }

  // Near-invariance of every retained point.
  for (const auto& theta : cloud.points) {
    const StateVector moved =
        st.evolve_state(theta, 0.0, opts.snapshot_interval, none);
    if (dist_to_attractor(moved, cloud) > 2.0 * cloud.resolution)
      throw NumericsError(
          "attractor cloud point moved beyond 2 delta under one snapshot "
          "interval; resolution target too tight");
  }
  return cloud;
}

double KLEnvelope::eval(double r, double t) const {
  return amplitude.eval(r) * std::exp(-rate * t);
}

namespace {

/// Least-squares slope of log d against t over the decaying segment
/// (peak onward). Returns false when the segment is too short.
bool tail_rate(const DecaySample& s, double& rate_out) {
  if (s.dists.size() < 3) return false;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < s.dists.size(); ++i)
    if (s.dists[i] > s.dists[peak]) peak = i;
  std::size_t count = 0;
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t i = peak; i < s.dists.size(); ++i) {
    if (!(s.dists[i] > 0.0)) continue;
    const double t = s.times[i];
    const double l = std::log(s.dists[i]);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    ++count;
  }
  if (count < 3) return false;
  const double denom = static_cast<double>(count) * stt - st * st;
  if (denom <= 0.0) return false;
  const double slope = (static_cast<double>(count) * stl - st * sl) / denom;
  if (!(slope < 0.0)) return false;
  rate_out = -slope;
  return true;
}

}  // namespace

KLEnvelope fit_envelope(const std::vector<DecaySample>& samples, double floor,
                        double inflation) {
  if (samples.empty()) throw Error("fit_envelope: no samples");
  if (!(floor >= 0.0)) throw Error("fit_envelope: negative floor");

  KLEnvelope env;
  env.inflation = inflation;
  env.floor = floor;

  // Rate: the most conservative (smallest) per-sample tail rate, so
  // d(t) e^{rate t} peaks early instead of growing along the tail.
  // Floored at 0.05: smaller rates would underflow the e^{-(lambda+c0)T}
  // weights downstream.
  double rate = 1e300;
  bool any = false;
  for (const auto& s : samples) {
    double a = 0.0;
    if (tail_rate(s, a)) {
      rate = std::min(rate, a);
      any = true;
    }
  }
  if (!any) {
    env.degenerate = true;
    rate = 1.0;
  }
  env.rate = std::min(std::max(rate, 0.05), 1e3);

  // Amplitude knots: inflated sup of d(t) e^{rate t} per sample, floored,
  // made a monotone upper envelope over sorted initial distances.
  std::vector<MonotoneCurve::Knot> knots;
  for (const auto& s : samples) {
    if (!(s.r0 > 0.0)) continue;
    double peak = 0.0;
    for (std::size_t i = 0; i < s.dists.size(); ++i)
      peak = std::max(peak, s.dists[i] * std::exp(env.rate * s.times[i]));
    const double value =
        std::max({(1.0 + inflation) * peak, floor, (1.0 + inflation) * s.r0});
    knots.push_back({s.r0, value});
  }
  if (knots.empty()) throw Error("fit_envelope: all samples at zero distance");
  std::sort(knots.begin(), knots.end(),
            [](const auto& a, const auto& b) { return a.r < b.r; });
  double running = 0.0;
  for (auto& k : knots) {
    running = std::max(running, k.value);
    k.value = running;
  }
  knots.insert(knots.begin(), {0.0, 0.0});
  knots = detail::sanitize_knots(std::move(knots));
  if (knots.size() < 2)
    throw Error("fit_envelope: degenerate knot set after sanitize");
  env.amplitude = MonotoneCurve::make(std::move(knots));

  // Domination check over the fitting set (construction guarantees it;
  // verified to catch knot sanitize regressions).
  for (const auto& s : samples)
    for (std::size_t i = 0; i < s.dists.size(); ++i)
      if (env.eval(std::max(s.r0, 1e-300), s.times[i]) <
          s.dists[i] * (1.0 - 1e-12))
        throw NumericsError("fit_envelope: envelope fails to dominate sample");
  return env;
}

Beta0Fit fit_beta0(const Stepper& st, const AttractorCloud& cloud,
                   const EnvelopeFitOptions& opts) {
  if (opts.samples < 1) throw Error("fit_beta0: need samples >= 1");
  if (!(opts.r0 > 0.0)) throw Error("fit_beta0: r0 must be > 0");

  const Grid& g = st.grid();
  const double arrival = std::max(2.0 * cloud.resolution, 1e-9);
  const Disturbance none = Disturbance::zero();

  std::vector<DecaySample> samples(static_cast<std::size_t>(opts.samples));
  std::vector<std::string> failures(static_cast<std::size_t>(opts.samples));

  parallel_for(samples.size(), opts.threads, [&](std::size_t j) {
    Rng rng(opts.seed, j);
    const StateVector& theta = cloud.points[j % cloud.points.size()];
    const double target = opts.r0 * static_cast<double>(j + 1) /
                          static_cast<double>(opts.samples);
    const StateVector dir =
        scaled_to_norm(random_smooth_state(g, rng, opts.sample_modes), 1.0);
    const StateVector x0 = add_scaled(theta, target, dir);

    DecaySample sample;
    std::size_t hint = 0;
    bool arrived = false;
    st.walk(x0, 0.0, opts.horizon, none,
            [&](long k, double time, const std::vector<double>& y) {
              if (arrived) return;
              if (k % opts.record_stride != 0) return;
              const double d = dist_to_attractor_hinted(y, cloud, hint);
              sample.times.push_back(time);
              sample.dists.push_back(d);
              if (d <= arrival) arrived = true;
            });
    sample.r0 = sample.dists.empty() ? 0.0 : sample.dists.front();
    if (!arrived)
      failures[j] = "fit_beta0: sample " + std::to_string(j) +
                    " did not decay to the arrival threshold " +
                    std::to_string(arrival) + " within the horizon";
    samples[j] = std::move(sample);
  });

  for (const auto& f : failures)
    if (!f.empty()) throw NumericsError(f);

  Beta0Fit fit;
  fit.envelope =
      fit_envelope(samples, std::max(cloud.resolution, 1e-9), opts.inflation);
  fit.samples = std::move(samples);
  return fit;
}

}  // namespace liss
