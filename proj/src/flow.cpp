#include "flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "power.hpp"

namespace curveflow {

StepControl StepControl::for_horizon(double t_end) {
  StepControl c;
  c.t_end = t_end;
  c.sample_interval = t_end / 200.0;
  c.dt_max = c.sample_interval;
  c.dt_min = 1e-12 * t_end;
  return c;
}

void StepControl::validate(double kappa_max0) const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw SpecError("cfl must lie in (0, 1]");
  if (!(dt_min > 0.0 && dt_min < dt_max)) throw SpecError("need 0 < dt_min < dt_max");
  if (!(t_end > 0.0)) throw SpecError("t_end must be positive");
  if (!(sample_interval > 0.0)) throw SpecError("sample_interval must be positive");
  if (!(kappa_blowup > kappa_max0))
    throw SpecError("kappa_blowup (" + std::to_string(kappa_blowup) +
                    ") must exceed the initial maximal curvature (" + std::to_string(kappa_max0) +
                    ")");
}

namespace {

// lambda from the radius of curvature rho = 1/kappa.
double lambda_from_rho(std::span<const double> rho, const PeriodicGrid& g,
                       const FlowParams& params) {
  const double a = params.alpha;
  if (params.kind == FlowKind::AreaPreserving) {
    const Power pw(1.0 - a);
    double num = 0.0;
    double len = 0.0;
    for (double r : rho) {
      num += pw(r);
      len += r;
    }
    return num / len;
  }
  const Power pw(-a);
  double f = 0.0;
  for (double r : rho) f += pw(r);
  return f * g.dtheta() / (2.0 * g.m() * std::numbers::pi);
}

double lambda_from_v(std::span<const double> v, const PeriodicGrid& g, const FlowParams& params) {
  const double a = params.alpha;
  if (params.kind == FlowKind::AreaPreserving) {
    const Power pw_num((a - 1.0) / a);
    const Power pw_len(-1.0 / a);
    double num = 0.0;
    double len = 0.0;
    for (double x : v) {
      num += pw_num(x);
      len += pw_len(x);
    }
    return num / len;
  }
  double f = 0.0;
  for (double x : v) f += x;
  return f * g.dtheta() / (2.0 * g.m() * std::numbers::pi);
}

PeriodicField checked_rho(const SupportState& s) {
  PeriodicField rho = radius_of_curvature(s);
  if (!(rho.min() > 0.0))
    throw ConvexityError("local convexity lost: min(h + h_thth) = " + std::to_string(rho.min()) +
                         " at t = " + std::to_string(s.t));
  return rho;
}

void check_positive(const CurvatureState& c) {
  if (!(c.v.min() > 0.0))
    throw ConvexityError("v = kappa^alpha lost positivity at t = " + std::to_string(c.t));
}

std::vector<double> axpy(std::span<const double> x, double a, std::span<const double> y) {
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + a * y[j];
  return out;
}

// Generic RK4 driver over a state type with a `field` accessor.
template <class State, class Rhs, class Make>
State rk4(const State& s, const PeriodicField& y0, double dt, Rhs&& rhs, Make&& make) {
  const PeriodicGrid& g = y0.grid();
  const PeriodicField k1 = rhs(s);
  const State s2 = make(PeriodicField(g, axpy(y0.values(), 0.5 * dt, k1.values())), s.t + 0.5 * dt);
  const PeriodicField k2 = rhs(s2);
  const State s3 = make(PeriodicField(g, axpy(y0.values(), 0.5 * dt, k2.values())), s.t + 0.5 * dt);
  const PeriodicField k3 = rhs(s3);
  const State s4 = make(PeriodicField(g, axpy(y0.values(), dt, k3.values())), s.t + dt);
  const PeriodicField k4 = rhs(s4);
  std::vector<double> out(y0.values().begin(), y0.values().end());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] += dt / 6.0 *
              (k1.values()[j] + 2.0 * k2.values()[j] + 2.0 * k3.values()[j] + k4.values()[j]);
  return make(PeriodicField(g, std::move(out)), s.t + dt);
}

}  // namespace

double lambda_of(const SupportState& s, const FlowParams& params) {
  const PeriodicField rho = checked_rho(s);
  return lambda_from_rho(rho.values(), s.grid(), params);
}

double lambda_of(const CurvatureState& c, const FlowParams& params) {
  check_positive(c);
  return lambda_from_v(c.v.values(), c.grid(), params);
}

PeriodicField rhs_support(const SupportState& s, const FlowParams& params) {
  const PeriodicField rho = checked_rho(s);
  const double lambda = lambda_from_rho(rho.values(), s.grid(), params);
  const Power pw(-params.alpha);
  return rho.map([&](double r) { return lambda - pw(r); });
}

PeriodicField rhs_curvature(const CurvatureState& c, const FlowParams& params) {
  check_positive(c);
  const double lambda = lambda_from_v(c.v.values(), c.grid(), params);
  const PeriodicField vpp = differentiate(c.v, 2);
  const double a = params.alpha;
  const Power pw(params.p());
  std::vector<double> out(static_cast<std::size_t>(c.v.size()));
  for (int j = 0; j < c.v.size(); ++j) {
    const double v = c.v[j];
    out[static_cast<std::size_t>(j)] = a * pw(v) * (vpp[j] + v - lambda);
  }
  return {c.grid(), std::move(out)};
}

double stable_dt(const PeriodicGrid& grid, double kappa_max, const FlowParams& params,
                 const StepControl& ctl) {
  const double dth = grid.dtheta();
  const double bound = ctl.cfl * dth * dth / (params.alpha * std::pow(kappa_max, params.alpha + 1.0));
  return std::min(ctl.dt_max, bound);
}

SupportState rk4_step(const SupportState& s, const FlowParams& params, double dt) {
  return rk4(
      s, s.h, dt, [&](const SupportState& x) { return rhs_support(x, params); },
      [](PeriodicField f, double t) { return SupportState{std::move(f), t}; });
}

CurvatureState rk4_step(const CurvatureState& c, const FlowParams& params, double dt) {
  return rk4(
      c, c.v, dt, [&](const CurvatureState& x) { return rhs_curvature(x, params); },
      [](PeriodicField f, double t) { return CurvatureState{std::move(f), t}; });
}

StepResult advance(const SupportState& s, const FlowParams& params, const StepControl& ctl,
                   double dt_cap) {
  const double kappa_max = 1.0 / checked_rho(s).min();
  const double dt_stable = stable_dt(s.grid(), kappa_max, params, ctl);
  if (dt_stable < ctl.dt_min)
    throw StepFloorError("stable step " + std::to_string(dt_stable) + " is below dt_min " +
                             std::to_string(ctl.dt_min) + " (kappa_max = " +
                             std::to_string(kappa_max) + ")",
                         dt_stable);
  const double dt = std::min(dt_stable, dt_cap);
  SupportState next = rk4_step(s, params, dt);
  checked_rho(next);
  return {std::move(next), dt};
}

}  // namespace curveflow
