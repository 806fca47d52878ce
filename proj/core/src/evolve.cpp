#include "liss/evolve.hpp"

#include <cmath>
#include <string>

#include "liss/errors.hpp"

namespace liss {

Stepper::Stepper(Grid grid, NonlinearSpec reaction, ControlShape shape,
                 StepperOptions options)
    : grid_(grid),
      reaction_(std::move(reaction)),
      shape_(std::move(shape)),
      options_(options) {
  if (!(options_.dt > 0.0)) throw Error("stepper: dt must be positive");
  if (!(options_.blowup_norm > 0.0))
    throw Error("stepper: blow-up threshold must be positive");
  detail::require_bound(grid_, shape_.profile, "stepper");

  const int n = grid_.interior_count;
  const double h2 = grid_.spacing * grid_.spacing;
  const double diag = 1.0 + 2.0 * options_.dt / h2;
  off_ = -options_.dt / h2;
  upper_.resize(n);
  inv_pivot_.resize(n);
  double pivot = diag;
  inv_pivot_[0] = 1.0 / pivot;
  upper_[0] = off_ * inv_pivot_[0];
  for (int i = 1; i < n; ++i) {
    pivot = diag - off_ * upper_[i - 1];
    inv_pivot_[i] = 1.0 / pivot;
    upper_[i] = off_ * inv_pivot_[i];
  }
  polynomial_reaction_ = !reaction_.coefficients.empty();
}

namespace {

inline double horner(const std::vector<double>& c, double r) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * r + c[i];
  return acc;
}

}  // namespace

bool Stepper::walk(
    const StateVector& x, double s, double t, const Disturbance& u,
    const std::function<void(long, double, const std::vector<double>&)>& visit)
    const {
  detail::require_bound(grid_, x, "evolve");
  if (!(s >= 0.0) || !(t >= s)) throw Error("evolve: need 0 <= s <= t");

  const double dt = options_.dt;
  const double raw_steps = (t - s) / dt;
  const long steps = std::lround(raw_steps);
  const bool rounded = std::abs(raw_steps - static_cast<double>(steps)) >
                       1e-9 * std::max(1.0, raw_steps);

  const int n = grid_.interior_count;
  std::vector<double> y = x.values;
  std::vector<double> rhs(n);
  const std::vector<double>& hvals = shape_.profile.values;

  visit(0, s, y);

  for (long k = 0; k < steps; ++k) {
    const double time = s + static_cast<double>(k) * dt;
    const double force = u.eval(time);
    if (polynomial_reaction_) {
      const std::vector<double>& c = reaction_.coefficients;
      for (int i = 0; i < n; ++i)
        rhs[i] = y[i] + dt * (horner(c, y[i]) + hvals[i] * force);
    } else {
      for (int i = 0; i < n; ++i)
        rhs[i] = y[i] + dt * (reaction_.g(y[i]) + hvals[i] * force);
    }
    // Thomas solve of (I - dt Lap) y+ = rhs with the cached factorization.
    y[0] = rhs[0] * inv_pivot_[0];
    for (int i = 1; i < n; ++i) y[i] = (rhs[i] - off_ * y[i - 1]) * inv_pivot_[i];
    for (int i = n - 2; i >= 0; --i) y[i] -= upper_[i] * y[i + 1];

    double sum = 0.0;
    bool finite = true;
    for (int i = 0; i < n; ++i) {
      sum += y[i] * y[i];
      finite = finite && std::isfinite(y[i]);
    }
    const double norm = std::sqrt(grid_.spacing * sum);
    if (!finite || norm > options_.blowup_norm) {
      const double t_bad = s + static_cast<double>(k + 1) * dt;
      throw BlowUpError(t_bad, "trajectory blow-up at t = " +
                                   std::to_string(t_bad) +
                                   " (non-finite or norm > threshold)");
    }
    visit(k + 1, s + static_cast<double>(k + 1) * dt, y);
  }
  return rounded;
}

StateVector Stepper::step(const StateVector& y, double t,
                          const Disturbance& u) const {
  StateVector out = StateVector::zeros(grid_);
  walk(y, t, t + options_.dt, u,
       [&](long k, double, const std::vector<double>& v) {
         if (k == 1) out.values = v;
       });
  return out;
}

Trajectory Stepper::evolve(const StateVector& x, double s, double t,
                           const Disturbance& u) const {
  Trajectory traj;
  traj.disturbance = u;
  traj.time_rounded =
      walk(x, s, t, u, [&](long, double time, const std::vector<double>& y) {
        StateVector state;
        state.grid = grid_;
        state.values = y;
        traj.times.push_back(time);
        traj.norms.push_back(l2_norm(grid_, state));
        traj.max_amplitude = std::max(traj.max_amplitude, max_abs(state));
        traj.states.push_back(std::move(state));
      });
  return traj;
}

StateVector Stepper::evolve_state(const StateVector& x, double s, double t,
                                  const Disturbance& u) const {
  StateVector out = x;
  walk(x, s, t, u, [&](long, double, const std::vector<double>& y) {
    out.values = y;
  });
  return out;
}

double lipschitz_gap(const Stepper& st, const StateVector& y01,
                     const StateVector& y02, double t) {
  if (!(t >= 0.0)) throw Error("lipschitz_gap: negative time");
  const double d0 = l2_distance(st.grid(), y01, y02);
  if (d0 == 0.0) return 0.0;
  const Disturbance none = Disturbance::zero();
  const StateVector a = st.evolve_state(y01, 0.0, t, none);
  const StateVector b = st.evolve_state(y02, 0.0, t, none);
  const double dt_dist = l2_distance(st.grid(), a, b);
  return dt_dist / (std::exp(st.reaction().lambda * t) * d0);
}

double disturbance_gap(const Stepper& st, const StateVector& y0,
                       const Disturbance& u, double t) {
  if (!(t > 0.0 && t <= 1.0))
    throw Error("disturbance_gap: t must lie in (0, 1]");
  if (u.sup_norm() == 0.0) return 0.0;
  const StateVector disturbed = st.evolve_state(y0, 0.0, t, u);
  const StateVector free = st.evolve_state(y0, 0.0, t, Disturbance::zero());
  const double dev = l2_distance(st.grid(), disturbed, free);
  const double lambda = st.reaction().lambda;
  const double bound =
      2.0 * std::exp(2.0 * lambda) * st.shape().norm * u.sup_norm() * t;
  return dev / bound;
}

}  // namespace liss
