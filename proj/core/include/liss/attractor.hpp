#pragma once

#include <cstdint>
#include <vector>

#include "liss/comparison.hpp"
#include "liss/evolve.hpp"
#include "liss/grid.hpp"

namespace liss {

struct AttractorOptions {
  int ensemble = 32;
  double radius = 3.0;
  std::uint64_t seed = 1;
  double delta_target = 1e-3;
  double burn_in = 20.0;
  double snapshot_interval = 1.0;
  int max_generations = 200;
  int sample_modes = 8;
  unsigned threads = 1;
};

/// Finite point-cloud approximation of the global attractor of the
/// undisturbed semigroup, with the resolution achieved by the generation
/// iteration.
struct AttractorCloud {
  Grid grid;
  std::vector<StateVector> points;
  double resolution = 0.0;  // Hausdorff gap between the last two generations
  double burn_in = 0.0;
  double snapshot_interval = 0.0;
  int ensemble = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  int generations_used = 0;
};

/// Evolves a norm-stratified random ensemble from the absorbing ball under
/// u = 0, snapshots generations after burn-in, and stops when consecutive
/// generations are delta_target-close in symmetric Hausdorff distance.
/// The final generation, deduplicated at delta_target/2 spacing, is the
/// cloud. Verifies near-invariance of every retained point.
AttractorCloud approximate_attractor(const Stepper& st,
                                     const AttractorOptions& opts);

/// dist(x, Theta): minimum discrete L2 distance to any cloud point.
double dist_to_attractor(const StateVector& x, const AttractorCloud& cloud);

/// Same query on raw values with a warm-start index; the hint is updated
/// to the argmin. Used in per-step trajectory scans.
double dist_to_attractor_hinted(const std::vector<double>& y,
                                const AttractorCloud& cloud,
                                std::size_t& hint);

/// Symmetric Hausdorff distance between two state families.
double hausdorff_distance(const Grid& g, const std::vector<StateVector>& a,
                          const std::vector<StateVector>& b);

/// Product-form class-KL envelope beta0(r, t) = amplitude(r) e^{-rate t}.
struct KLEnvelope {
  MonotoneCurve amplitude;  // class K in r
  double rate = 1.0;        // a > 0
  double inflation = 0.1;   // safety factor applied to the fitted knots
  double floor = 0.0;       // value floor tied to the cloud resolution
  bool degenerate = false;  // no decaying data; flat floor envelope

  double eval(double r, double t) const;
};

/// One fitting record: initial distance, sample times and distances to the
/// cloud, truncated at arrival (first time the distance drops to the
/// arrival threshold). Post-arrival floor values carry no envelope
/// information and are excluded.
struct DecaySample {
  double r0 = 0.0;
  std::vector<double> times;
  std::vector<double> dists;
};

/// Pure envelope fitter (independent of the simulator): rate from the
/// most conservative per-sample tail regression, amplitude as the
/// inflated monotone upper envelope of max_t d(t) e^{rate t}.
KLEnvelope fit_envelope(const std::vector<DecaySample>& samples, double floor,
                        double inflation = 0.10);

struct EnvelopeFitOptions {
  int samples = 48;
  double r0 = 1.0;
  double horizon = 40.0;
  std::uint64_t seed = 2;
  double inflation = 0.10;
  int record_stride = 10;  // record every stride-th step
  int sample_modes = 8;
  unsigned threads = 1;
};

struct Beta0Fit {
  KLEnvelope envelope;
  std::vector<DecaySample> samples;
};

/// Simulates undisturbed trajectories from initial points at stratified
/// distances in (0, r0] from the cloud and fits the KL envelope. Aborts
/// when a trajectory fails to reach the arrival threshold within the
/// horizon.
Beta0Fit fit_beta0(const Stepper& st, const AttractorCloud& cloud,
                   const EnvelopeFitOptions& opts);

}  // namespace liss
