#pragma once

#include <span>
#include <vector>

namespace liss {

/// Class-K function represented as a strictly increasing piecewise-linear
/// curve through (0,0). Beyond the last knot the curve continues with its
/// final slope, so every curve is unbounded and globally invertible.
class MonotoneCurve {
 public:
  struct Knot {
    double r = 0.0;
    double value = 0.0;
  };

  /// Validating constructor: first knot (0,0), both coordinates strictly
  /// increasing.
  static MonotoneCurve make(std::vector<Knot> knots);

  /// Identity on [0, r_max].
  static MonotoneCurve identity(double r_max = 1.0);

  /// r -> slope * r on [0, r_max]; slope > 0.
  static MonotoneCurve linear(double slope, double r_max = 1.0);

  double eval(double r) const;

  /// Coordinate swap; exact inverse of a piecewise-linear bijection.
  MonotoneCurve inverse() const;

  /// factor * f, factor > 0.
  MonotoneCurve scaled(double factor) const;

  double final_slope() const;
  double max_slope() const;
  double max_r() const { return knots_.back().r; }
  double max_value() const { return knots_.back().value; }
  const std::vector<Knot>& knots() const { return knots_; }

 private:
  MonotoneCurve() = default;
  std::vector<Knot> knots_;
};

/// Exact piecewise-linear composition f(g(r)). Breakpoints are the union
/// of g's knots and the preimages under g of f's knots.
MonotoneCurve compose(const MonotoneCurve& f, const MonotoneCurve& g);

namespace detail {
/// Drops knots that break strict monotonicity (floating-point ties when
/// assembling curves from computed values). Keeps the first knot.
std::vector<MonotoneCurve::Knot> sanitize_knots(
    std::vector<MonotoneCurve::Knot> knots);
}  // namespace detail

/// Flow of the scalar decay equation v' = -A(v) at time t, A class K,
/// v0 >= 0. RK4 with step halving until two refinements agree to 1e-9
/// relative; result clamped at 0.
double solve_decay(const MonotoneCurve& A, double v0, double t);

/// Flow of v' = -A(v) sampled along a non-decreasing time grid starting
/// from t = 0. Fixed substeps sized from the curve's maximal slope.
std::vector<double> decay_path(const MonotoneCurve& A, double v0,
                               std::span<const double> times);

/// Marching evaluator for the same flow; used to stream values without
/// materializing a time grid.
class DecayMarcher {
 public:
  DecayMarcher(const MonotoneCurve& A, double v0);
  /// Advances to absolute time t (>= current time) and returns v(t).
  double advance_to(double t);
  double value() const { return v_; }

 private:
  const MonotoneCurve* curve_;
  double v_;
  double t_ = 0.0;
  double step_;
};

/// The estimate data of the stability theorem: beta(r, t) built from the
/// comparison-lemma flow, and gamma as an exact curve composition.
class BetaGamma {
 public:
  BetaGamma(MonotoneCurve psi_lower, MonotoneCurve psi_upper,
            MonotoneCurve chi, MonotoneCurve decay_curve);

  /// beta(r, t) = psi_lower^{-1}( flow_A(psi_upper(r), t) ).
  double beta(double r, double t) const;

  /// beta(r, t_j) along a non-decreasing time grid (single flow march).
  std::vector<double> beta_path(double r, std::span<const double> times) const;

  const MonotoneCurve& gamma() const { return gamma_; }
  const MonotoneCurve& psi_lower() const { return psi_lower_; }
  const MonotoneCurve& psi_upper() const { return psi_upper_; }
  const MonotoneCurve& chi() const { return chi_; }
  const MonotoneCurve& decay_curve() const { return decay_curve_; }

  /// True when evaluating beta(r, .) starts beyond psi_lower's knot span,
  /// i.e. the final-slope extension is in play at t = 0.
  bool extrapolates(double r) const;

 private:
  MonotoneCurve psi_lower_, psi_upper_, chi_, decay_curve_;
  MonotoneCurve psi_lower_inv_;
  MonotoneCurve gamma_;
};

BetaGamma build_beta_gamma(MonotoneCurve psi_lower, MonotoneCurve psi_upper,
                           MonotoneCurve chi, MonotoneCurve decay_curve);

}  // namespace liss
