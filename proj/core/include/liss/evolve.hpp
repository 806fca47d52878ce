#pragma once

#include <functional>
#include <vector>

#include "liss/grid.hpp"
#include "liss/system.hpp"

namespace liss {

struct StepperOptions {
  double dt = 1e-3;
  double blowup_norm = 1e6;
};

/// Recorded solution path of one evolve() call.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  Disturbance disturbance = Disturbance::zero();
  std::vector<double> norms;
  double max_amplitude = 0.0;
  /// Set when t - s was not an integer multiple of dt and got rounded.
  bool time_rounded = false;
};

/// IMEX Euler time stepper for
///   dy/dt = Lap(y) + g(y) + h * u(t)
/// with implicit diffusion and explicit reaction/forcing:
///   (I - dt Lap) y+ = y + dt (g(y) + h u(t)).
/// The tridiagonal factorization is precomputed once; stepping is pure and
/// safe to call concurrently.
class Stepper {
 public:
  Stepper(Grid grid, NonlinearSpec reaction, ControlShape shape,
          StepperOptions options = {});

  const Grid& grid() const { return grid_; }
  const NonlinearSpec& reaction() const { return reaction_; }
  const ControlShape& shape() const { return shape_; }
  double dt() const { return options_.dt; }
  double blowup_norm() const { return options_.blowup_norm; }

  /// One IMEX step from state y at time t with disturbance u.
  StateVector step(const StateVector& y, double t, const Disturbance& u) const;

  /// Streams the solution of the semiprocess S_u(., s, x): visit(k, time,
  /// values) is called for k = 0 (initial state) through k = steps. The
  /// number of steps is round((t - s)/dt); returns true when rounding was
  /// needed. Throws BlowUpError on non-finite values or norm blow-up.
  bool walk(const StateVector& x, double s, double t, const Disturbance& u,
            const std::function<void(long k, double time,
                                     const std::vector<double>& y)>& visit)
      const;

  /// S_u(t, s, x) as a recorded trajectory.
  Trajectory evolve(const StateVector& x, double s, double t,
                    const Disturbance& u) const;

  /// Final state only.
  StateVector evolve_state(const StateVector& x, double s, double t,
                           const Disturbance& u) const;

 private:
  Grid grid_;
  NonlinearSpec reaction_;
  ControlShape shape_;
  StepperOptions options_;
  // Thomas factorization of (I - dt Lap): modified upper coefficients and
  // reciprocal pivots.
  std::vector<double> upper_;
  std::vector<double> inv_pivot_;
  double off_ = 0.0;
  bool polynomial_reaction_ = false;
};

/// || S_0(t,0,y01) - S_0(t,0,y02) || / (e^{lambda t} ||y01 - y02||).
/// Returns 0 when y01 == y02. The deviation estimate asserts <= 1 for the
/// exact flow.
double lipschitz_gap(const Stepper& st, const StateVector& y01,
                     const StateVector& y02, double t);

/// || S_u(t,0,y0) - S_0(t,0,y0) || / (2 e^{2 lambda} ||h|| ||u||_inf t),
/// valid for t in (0, 1]. Returns 0 when u is identically zero.
double disturbance_gap(const Stepper& st, const StateVector& y0,
                       const Disturbance& u, double t);

}  // namespace liss
