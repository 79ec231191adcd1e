#pragma once

#include <limits>

#include "curve.hpp"

namespace curveflow {

// Step-size and stopping controls for the explicit integrator.
struct StepControl {
  double cfl = 0.25;
  double dt_max = 1e-2;
  double dt_min = 1e-11;
  double kappa_blowup = 1e6;
  double t_end = 10.0;
  double sample_interval = 0.05;

  // Defaults that scale with t_end: dt_min = 1e-12 t_end, sampling every
  // t_end / 200, dt_max equal to the sampling interval.
  static StepControl for_horizon(double t_end);

  // Throws SpecError. kappa_max0 is the initial maximal curvature.
  void validate(double kappa_max0) const;
};

// Nonlocal multiplier. AP: int kappa^{alpha-1} / int kappa^{-1}; LP: int kappa^alpha / (2 m pi).
double lambda_of(const SupportState& s, const FlowParams& params);
double lambda_of(const CurvatureState& c, const FlowParams& params);

// h_t = lambda - (h + h_thth)^{-alpha}.
PeriodicField rhs_support(const SupportState& s, const FlowParams& params);

// v_t = alpha v^p (v_thth + v - lambda), p = 1 + 1/alpha.
PeriodicField rhs_curvature(const CurvatureState& c, const FlowParams& params);

// Parabolic step bound cfl dtheta^2 / (alpha kappa_max^{alpha+1}), capped at dt_max.
double stable_dt(const PeriodicGrid& grid, double kappa_max, const FlowParams& params,
                 const StepControl& ctl);

// One classical RK4 step of fixed size; lambda is recomputed at every stage.
// Throws ConvexityError / NonFiniteError if an intermediate state degenerates.
SupportState rk4_step(const SupportState& s, const FlowParams& params, double dt);
CurvatureState rk4_step(const CurvatureState& c, const FlowParams& params, double dt);

struct StepResult {
  SupportState state;
  double dt = 0.0;
};

// Takes one step of size min(stable_dt, dt_cap). Throws StepFloorError when
// the stable step is below ctl.dt_min, ConvexityError when the new state is
// not locally convex.
StepResult advance(const SupportState& s, const FlowParams& params, const StepControl& ctl,
                   double dt_cap = std::numeric_limits<double>::infinity());

}  // namespace curveflow
