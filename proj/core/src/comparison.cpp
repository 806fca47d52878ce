#include "liss/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liss/errors.hpp"

namespace liss {

MonotoneCurve MonotoneCurve::make(std::vector<Knot> knots) {
  if (knots.size() < 2) throw Error("curve: need at least two knots");
  if (knots.front().r != 0.0 || knots.front().value != 0.0)
    throw Error("curve: first knot must be (0, 0)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].r) || !std::isfinite(knots[i].value))
      throw Error("curve: non-finite knot");
    if (!(knots[i].r > knots[i - 1].r) ||
        !(knots[i].value > knots[i - 1].value))
      throw Error("curve: knots must be strictly increasing in r and value");
  }
  MonotoneCurve c;
  c.knots_ = std::move(knots);
  return c;
}

MonotoneCurve MonotoneCurve::identity(double r_max) {
  return make({{0.0, 0.0}, {r_max, r_max}});
}

MonotoneCurve MonotoneCurve::linear(double slope, double r_max) {
  if (!(slope > 0.0)) throw Error("curve: slope must be positive");
  return make({{0.0, 0.0}, {r_max, slope * r_max}});
}

double MonotoneCurve::eval(double r) const {
  if (r < 0.0) {
    if (r > -1e-15) return 0.0;
    throw Error("curve: negative argument " + std::to_string(r));
  }
  // Find the segment [knots_[lo], knots_[lo+1]) containing r.
  std::size_t lo = 0;
  std::size_t hi = knots_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (knots_[mid].r <= r)
      lo = mid;
    else
      hi = mid;
  }
  if (lo + 1 == knots_.size()) {
    return knots_.back().value + final_slope() * (r - knots_.back().r);
  }
  const Knot& a = knots_[lo];
  const Knot& b = knots_[lo + 1];
  const double w = (r - a.r) / (b.r - a.r);
  return a.value + w * (b.value - a.value);
}

MonotoneCurve MonotoneCurve::inverse() const {
  std::vector<Knot> swapped(knots_.size());
  for (std::size_t i = 0; i < knots_.size(); ++i)
    swapped[i] = {knots_[i].value, knots_[i].r};
  return make(std::move(swapped));
}

MonotoneCurve MonotoneCurve::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("curve: scale factor must be positive");
  std::vector<Knot> k = knots_;
  for (auto& knot : k) knot.value *= factor;
  return make(std::move(k));
}

double MonotoneCurve::final_slope() const {
  const Knot& a = knots_[knots_.size() - 2];
  const Knot& b = knots_.back();
  return (b.value - a.value) / (b.r - a.r);
}

double MonotoneCurve::max_slope() const {
  double s = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i)
    s = std::max(s, (knots_[i].value - knots_[i - 1].value) /
                        (knots_[i].r - knots_[i - 1].r));
  return s;
}

namespace detail {

std::vector<MonotoneCurve::Knot> sanitize_knots(
    std::vector<MonotoneCurve::Knot> knots) {
  std::sort(knots.begin(), knots.end(),
            [](const auto& a, const auto& b) { return a.r < b.r; });
  std::vector<MonotoneCurve::Knot> out;
  for (const auto& k : knots) {
    if (out.empty()) {
      out.push_back(k);
      continue;
    }
    if (k.r > out.back().r && k.value > out.back().value) out.push_back(k);
  }
  return out;
}

}  // namespace detail

MonotoneCurve compose(const MonotoneCurve& f, const MonotoneCurve& g) {
  const MonotoneCurve g_inv = g.inverse();
  std::vector<double> breaks;
  for (const auto& k : g.knots()) breaks.push_back(k.r);
  for (const auto& k : f.knots()) breaks.push_back(g_inv.eval(k.r));
  // One knot beyond all breakpoints so the final slope of the composition
  // is the product of the final slopes.
  double big = 1.0;
  for (double b : breaks) big = std::max(big, b);
  breaks.push_back(big * 2.0 + 1.0);

  std::sort(breaks.begin(), breaks.end());
  std::vector<MonotoneCurve::Knot> knots;
  knots.push_back({0.0, 0.0});
  for (double r : breaks) {
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    knots.push_back({r, f.eval(g.eval(r))});
  }
  return MonotoneCurve::make(detail::sanitize_knots(std::move(knots)));
}

namespace {

// A extended oddly to negative arguments keeps RK4 stages smooth when a
// stage dips below zero.
inline double eval_odd(const MonotoneCurve& A, double v) {
  return v >= 0.0 ? A.eval(v) : -A.eval(-v);
}

double rk4_march(const MonotoneCurve& A, double v0, double t, long steps) {
  const double h = t / static_cast<double>(steps);
  double v = v0;
  for (long i = 0; i < steps; ++i) {
    const double k1 = -eval_odd(A, v);
    const double k2 = -eval_odd(A, v + 0.5 * h * k1);
    const double k3 = -eval_odd(A, v + 0.5 * h * k2);
    const double k4 = -eval_odd(A, v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (v <= 0.0) return 0.0;
  }
  return v;
}

inline double stable_step(const MonotoneCurve& A) {
  const double slope = std::max(A.max_slope(), 1e-12);
  return std::min(0.25 / slope, 0.02);
}

}  // namespace

double solve_decay(const MonotoneCurve& A, double v0, double t) {
  if (!(t >= 0.0)) throw Error("solve_decay: negative time");
  if (v0 <= 0.0) return 0.0;
  if (t == 0.0) return v0;

  long steps = std::max<long>(8, static_cast<long>(t / stable_step(A)) + 1);
  double coarse = rk4_march(A, v0, t, steps);
  for (int round = 0; round < 22; ++round) {
    steps *= 2;
    const double fine = rk4_march(A, v0, t, steps);
    if (std::abs(fine - coarse) <= 1e-9 * std::max(fine, 1e-300) + 1e-300)
      return fine;
    coarse = fine;
  }
  return coarse;
}

std::vector<double> decay_path(const MonotoneCurve& A, double v0,
                               std::span<const double> times) {
  DecayMarcher m(A, v0);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(m.advance_to(t));
  return out;
}

DecayMarcher::DecayMarcher(const MonotoneCurve& A, double v0)
    : curve_(&A), v_(std::max(v0, 0.0)), step_(stable_step(A) / 2.0) {}

double DecayMarcher::advance_to(double t) {
  if (t < t_) throw Error("decay march: times must be non-decreasing");
  while (t_ < t && v_ > 0.0) {
    const double h = std::min(step_, t - t_);
    const double k1 = -eval_odd(*curve_, v_);
    const double k2 = -eval_odd(*curve_, v_ + 0.5 * h * k1);
    const double k3 = -eval_odd(*curve_, v_ + 0.5 * h * k2);
    const double k4 = -eval_odd(*curve_, v_ + h * k3);
    v_ += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (v_ < 0.0) v_ = 0.0;
    t_ += h;
  }
  t_ = std::max(t_, t);
  return v_;
}

BetaGamma::BetaGamma(MonotoneCurve psi_lower, MonotoneCurve psi_upper,
                     MonotoneCurve chi, MonotoneCurve decay_curve)
    : psi_lower_(std::move(psi_lower)),
      psi_upper_(std::move(psi_upper)),
      chi_(std::move(chi)),
      decay_curve_(std::move(decay_curve)),
      psi_lower_inv_(psi_lower_.inverse()),
      gamma_(compose(psi_lower_inv_, compose(psi_upper_, chi_))) {}

double BetaGamma::beta(double r, double t) const {
  const double v0 = psi_upper_.eval(r);
  const double v = solve_decay(decay_curve_, v0, t);
  return psi_lower_inv_.eval(v);
}

std::vector<double> BetaGamma::beta_path(double r,
                                         std::span<const double> times) const {
  DecayMarcher m(decay_curve_, psi_upper_.eval(r));
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(psi_lower_inv_.eval(m.advance_to(t)));
  return out;
}

bool BetaGamma::extrapolates(double r) const {
  return psi_upper_.eval(r) > psi_lower_.max_value();
}

BetaGamma build_beta_gamma(MonotoneCurve psi_lower, MonotoneCurve psi_upper,
                           MonotoneCurve chi, MonotoneCurve decay_curve) {
  return BetaGamma(std::move(psi_lower), std::move(psi_upper), std::move(chi),
                   std::move(decay_curve));
}

}  // namespace liss
