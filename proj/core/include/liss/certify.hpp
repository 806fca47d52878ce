#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "liss/comparison.hpp"
#include "liss/lyapunov.hpp"

namespace liss {

/// Certified estimate data: beta/gamma evaluators and the admissible radii
/// r0x (initial distance) and r0u (disturbance magnitude).
struct Certificate {
  BetaGamma bg;
  double r0 = 1.0;
  double r0x = 0.0;
  double r0u = 0.0;
  double tolerance = 0.0;
  double cloud_resolution = 0.0;
  std::uint64_t seed = 0;
};

struct RadiiOptions {
  double margin = 0.01;  // strictness margin on the three inequalities
  double floor = 1e-60;  // below this the certificate is declared empty
};

/// Largest radii with r0x < r0, beta(r0x, 0) < r0 and gamma(r0u) < r0,
/// each found by bisection on the monotone condition with the stated
/// margin. Throws when no radius above the floor qualifies.
std::pair<double, double> select_radii(const BetaGamma& bg, double r0,
                                       RadiiOptions opts = {});

/// M_u membership: V(x) <= psi_upper(chi(||u||_inf)), for x in the r0-ball.
bool membership_mu(const StateVector& x, const Disturbance& u,
                   const IssLyapunovData& data, const LyapunovOracle& oracle);

struct MuCheckOptions {
  int samples = 50;
  double horizon = 20.0;
  double check_interval = 0.5;
  double tolerance = 1e-3;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  int max_attempts_per_sample = 64;
};

struct MuCheckResult {
  int samples = 0;
  double threshold = 0.0;          // psi_upper(chi(||u||_inf))
  double max_excess = 0.0;         // max over samples/time of V - threshold
  double containment_bound = 0.0;  // gamma-free containment radius gamma(||u||)
  double max_initial_dist = 0.0;   // max dist of accepted samples
  int violations = 0;
  bool stayed_in_ball = true;
  bool sampling_degenerate = false;  // only exact cloud points qualified
  std::vector<double> excess_per_sample;
};

/// Draws samples from M_u by rejection near the cloud, evolves them under
/// u, and reports the worst threshold excess of V along the way plus the
/// containment diagnostics.
MuCheckResult check_invariance_mu(const LyapunovOracle& oracle,
                                  const IssLyapunovData& data,
                                  const Disturbance& u,
                                  const MuCheckOptions& opts);

/// One falsification draw and its outcome. The initial state and the
/// disturbance are persisted in full so violations replay exactly.
struct SampleOutcome {
  std::uint64_t sample = 0;
  double x0_dist = 0.0;
  double u_norm = 0.0;
  double margin = 0.0;      // min over time of beta + gamma - dist
  double worst_time = 0.0;  // argmin time
  double max_dist = 0.0;    // max of dist along the trajectory
  std::vector<double> x0_values;
  std::vector<double> u_breakpoints;
  std::vector<double> u_values;
};

struct CertifyOptions {
  int samples = 500;
  double horizon = 20.0;
  std::uint64_t seed = 3;
  /// Violation tolerance; negative means "use 2 delta + 1e-3" with delta
  /// the cloud resolution (delta enters the distance evaluation and the
  /// V floor).
  double tolerance = -1.0;
  unsigned threads = 1;
  int max_breakpoints = 8;
  int sample_modes = 8;
  int mu_samples = 50;
  double mu_u_norm = -1.0;  // negative: use r0u
  double mu_horizon = 20.0;
  std::optional<double> r0u_override;
};

struct FalsificationReport {
  int samples = 0;
  double tolerance = 0.0;
  double horizon = 20.0;
  double min_margin = 0.0;
  double max_amplitude_observed = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<SampleOutcome> outcomes;    // per-sample, stripped of states
  std::vector<SampleOutcome> violations;  // full records for replay
  MuCheckResult mu;
  bool passed = false;
};

/// Builds beta and gamma from the Lyapunov data (decay curve
/// A = alpha o psi_upper^{-1}), selects radii, runs the Monte-Carlo
/// falsification of the stability estimate and the M_u invariance check.
std::pair<Certificate, FalsificationReport> certify_liss(
    const LyapunovOracle& oracle, const IssLyapunovData& data,
    const CertifyOptions& opts);

/// Margin of one persisted sample, recomputed from scratch over the same
/// horizon the report used.
double replay_margin(const LyapunovOracle& oracle, const Certificate& cert,
                     const SampleOutcome& sample, double horizon);

}  // namespace liss
