#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "liss/grid.hpp"

namespace liss {

/// Scalar reaction term g with the certificate constants of the growth
/// condition
///   -kappa - alpha1 |r|^p <= g(r) r <= kappa - alpha2 |r|^p,  g'(r) <= lambda.
/// The constants are stored, not proven; validate_conditions checks them
/// on a sample grid.
struct NonlinearSpec {
  std::function<double(double)> g;
  std::function<double(double)> g_prime;
  double p = 2.0;
  double q = 2.0;  // dual exponent, 1/p + 1/q = 1; kept for completeness
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double kappa = 1.0;
  double lambda = 1.0;
  /// Ascending polynomial coefficients when g is polynomial; empty otherwise.
  /// Used as a fast evaluation path and for serialization.
  std::vector<double> coefficients;

  static NonlinearSpec make(std::function<double(double)> g,
                            std::function<double(double)> g_prime, double p,
                            double q, double alpha1, double alpha2,
                            double kappa, double lambda,
                            std::vector<double> coefficients = {});
};

/// g(r) = -r^3 + r with its exact certificate
/// (p = 4, q = 4/3, alpha1 = 1, alpha2 = 1/2, kappa = 1/2, lambda = 1).
NonlinearSpec chafee_infante();

/// g identically zero; linear-heat test hook. Does not satisfy the growth
/// condition on large ranges and is not meant to.
NonlinearSpec zero_reaction();

/// Odd-degree polynomial with negative leading coefficient, ascending
/// coefficients {c0, c1, ...}. Certificate constants are found by a grid
/// scan over [-scan_range, scan_range] and inflated by 5%.
NonlinearSpec odd_polynomial(const std::vector<double>& coefficients,
                             double scan_range = 10.0);

struct ValidationReport {
  bool pass = false;
  bool lower_ok = false;       // -kappa - alpha1|r|^p <= g(r) r
  bool upper_ok = false;       // g(r) r <= kappa - alpha2|r|^p
  bool derivative_ok = false;  // g'(r) <= lambda
  double min_slack_lower = 0.0;
  double min_slack_upper = 0.0;
  double min_slack_derivative = 0.0;
  double argmin_lower = 0.0;
  double argmin_upper = 0.0;
  double argmin_derivative = 0.0;
  double r_max = 0.0;
  int n_samples = 0;
};

/// Samples r uniformly on [-r_max, r_max] and reports the worst slack of
/// each certificate inequality. Passes iff all slacks are >= 0.
ValidationReport validate_conditions(const NonlinearSpec& spec, double r_max,
                                     int n_samples);

/// Spatial control profile h with cached discrete L2 norm (> 0 required).
struct ControlShape {
  StateVector profile;
  double norm = 0.0;

  static ControlShape make(StateVector profile);
  /// sin(k pi zeta / L) normalized to unit discrete L2 norm.
  static ControlShape eigenmode(const Grid& g, int k);
};

/// Piecewise-constant scalar disturbance on [0, inf). The last value
/// extends to infinity. Breakpoint lookups use a tiny relative slack so
/// that time-shifted signals stay consistent with step-grid sampling
/// under floating-point subtraction.
class Disturbance {
 public:
  static Disturbance zero();
  static Disturbance constant(double value);
  static Disturbance piecewise(std::vector<double> breakpoints,
                               std::vector<double> values);

  /// Right-continuous evaluation, t >= 0.
  double eval(double t) const;
  double sup_norm() const { return sup_; }
  /// Signal t -> u(t + tau), re-anchored at 0; tau >= 0.
  Disturbance shift(double tau) const;
  bool is_zero() const { return sup_ == 0.0; }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return vals_; }

 private:
  Disturbance() = default;
  std::vector<double> breaks_;
  std::vector<double> vals_;
  double sup_ = 0.0;
};

}  // namespace liss
