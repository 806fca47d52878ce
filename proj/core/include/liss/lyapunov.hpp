#pragma once

#include <span>
#include <vector>

#include "liss/attractor.hpp"
#include "liss/comparison.hpp"
#include "liss/evolve.hpp"

namespace liss {

/// eta_eps(r) = max(0, r - eps); the 1-Lipschitz deadzone ramp.
double eta(double eps, double r);

/// Minimal T with envelope(r0, t) <= eps for all t >= T; closed form of
/// the product envelope: max(0, ln(amplitude(r0)/eps) / rate).
double time_to_shrink(const KLEnvelope& envelope, double r0, double eps);

/// The six comparison curves of the Lyapunov construction. psi_lower /
/// psi_upper sandwich V, alpha0 is the undisturbed decrease rate,
/// sigma0 the disturbance gain, chi = alpha0^{-1}(2 sigma0(.)) and
/// alpha = alpha0 / 2 the implication-form split.
struct IssLyapunovData {
  MonotoneCurve psi_lower;
  MonotoneCurve psi_upper;
  MonotoneCurve alpha0;
  MonotoneCurve sigma0;
  MonotoneCurve chi;
  MonotoneCurve alpha;
  double c0 = 0.5;
  double lambda = 1.0;
  double control_norm = 1.0;
  int psi_terms = 40;
};

struct LyapunovOptions {
  double c0 = 0.5;
  int truncation = 8;   // K: series depth used by V
  double r0 = 1.0;      // working radius of the Lyapunov ball
  int psi_terms = 40;   // series depth used by psi_lower (>= truncation)
  double r_max = 2.0;   // knot span of the constructed curves
};

struct DiniEstimate {
  double value = 0.0;
  bool exited_ball = false;
};

/// Evaluates the Lyapunov function
///   V(x) = sum_{k=1..K} 2^{-k} V^{1/k}(x),
///   V^eps(x) = e^{-(lambda+c0) T(eps)} sup_{t in [0,T(eps)]}
///              e^{c0 t} eta_eps( dist(S_0(t,0,x), Theta) )
/// on the r0-ball around the cloud. One undisturbed simulation serves all
/// K terms. Immutable and safe to evaluate concurrently.
class LyapunovOracle {
 public:
  LyapunovOracle(const Stepper& st, const AttractorCloud& cloud,
                 const KLEnvelope& envelope, LyapunovOptions opts = {});

  double c0() const { return opts_.c0; }
  double r0() const { return opts_.r0; }
  int truncation() const { return opts_.truncation; }
  double lambda() const { return stepper_.reaction().lambda; }
  const std::vector<double>& shrink_times() const { return shrink_times_; }
  /// Reported truncation-tail bound 2^{-K} beta0(r0, 0).
  double tail_bound() const { return tail_bound_; }
  const Stepper& stepper() const { return stepper_; }
  const AttractorCloud& cloud() const { return cloud_; }
  const KLEnvelope& envelope() const { return envelope_; }

  /// V^eps; one simulation over [0, T(eps)]. Requires dist(x) <= r0.
  double v_eps(const StateVector& x, double eps) const;

  /// Truncated V; one simulation over [0, T(1/K)]. Requires dist(x) <= r0.
  double v(const StateVector& x) const;

  /// Comparison curves of the construction (shared psi series depth).
  IssLyapunovData comparison_data() const;

  /// Conservative stand-in for the upper right Dini derivative along the
  /// disturbed flow: max over the {dt, 2dt, 4dt} ladder of forward
  /// quotients (V(S_u(dt_m, 0, x)) - V(x)) / dt_m. Rungs that leave the
  /// r0-ball are flagged and skipped.
  DiniEstimate dini_estimate(const StateVector& x, const Disturbance& u) const;

  /// Kernel of V^eps on a precomputed distance series; seam for tests
  /// that inject synthetic trajectories.
  static double weighted_eta_sup(std::span<const double> times,
                                 std::span<const double> dists, double eps,
                                 double c0, double t_max);

 private:
  double require_in_ball(const StateVector& x) const;

  Stepper stepper_;
  AttractorCloud cloud_;
  KLEnvelope envelope_;
  LyapunovOptions opts_;
  std::vector<double> shrink_times_;  // T(1/k), k = 1..K
  double tail_bound_ = 0.0;
};

}  // namespace liss
