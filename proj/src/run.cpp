#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "power.hpp"

namespace curveflow {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "Converged";
    case Verdict::BlowUp:
      return "BlowUp";
    case Verdict::TimeLimit:
      break;
  }
  return "TimeLimit";
}

std::string_view to_string(BlowUpWitness w) {
  switch (w) {
    case BlowUpWitness::KappaThreshold:
      return "kappa_threshold";
    case BlowUpWitness::StepFloor:
      return "dt_floor";
    case BlowUpWitness::ConvexityLoss:
      return "convexity_loss";
    case BlowUpWitness::ShrinkToPoint:
      break;
  }
  return "shrink_to_point";
}

Verdict RunOutcome::kind() const {
  if (std::holds_alternative<ConvergedVerdict>(verdict)) return Verdict::Converged;
  if (std::holds_alternative<BlowUpVerdict>(verdict)) return Verdict::BlowUp;
  return Verdict::TimeLimit;
}

namespace {

struct Measured {
  double kappa_max = 0.0;
  double L = 0.0;
  ConvergenceMeasure conv;
};

Measured measure(const SupportState& s, const FlowParams& params) {
  const PeriodicField rho = radius_of_curvature(s);
  if (!(rho.min() > 0.0)) throw ConvexityError("local convexity lost");
  const PeriodicGrid& g = s.grid();
  const double two_m_pi = 2.0 * g.m() * std::numbers::pi;
  const double a = params.alpha;

  Measured out;
  out.kappa_max = 1.0 / rho.min();
  out.L = integrate_periodic(s.h);
  const Power pw_num(1.0 - a);
  const Power pw_v(-a);
  double lambda_num = 0.0;
  double f = 0.0;
  for (double r : rho.values()) {
    lambda_num += pw_num(r);
    f += pw_v(r);
  }
  const double lambda = params.kind == FlowKind::AreaPreserving
                            ? lambda_num * g.dtheta() / out.L
                            : f * g.dtheta() / two_m_pi;
  for (double r : rho.values()) {
    out.conv.shape_error = std::max(out.conv.shape_error, std::abs(out.L / (r * two_m_pi) - 1.0));
    out.conv.residual = std::max(out.conv.residual, std::abs(pw_v(r) - lambda) / lambda);
  }
  out.conv.r_inf = out.L / two_m_pi;
  return out;
}

}  // namespace

ConvergenceMeasure convergence_measure(const SupportState& s, const FlowParams& params) {
  return measure(s, params).conv;
}

RunOutcome run(const SupportState& s0, const FlowParams& params, const StepControl& ctl,
               double tol_conv, const RunOptions& opts) {
  params.validate();
  if (params.m != s0.grid().m())
    throw SpecError("flow turning number m = " + std::to_string(params.m) +
                    " does not match the grid's m = " + std::to_string(s0.grid().m()));
  Measured cur = measure(s0, params);
  ctl.validate(cur.kappa_max);
  const double L0 = cur.L;
  // A run that starts on a fixed point is never reported as having converged.
  const bool starts_converged =
      cur.conv.shape_error <= tol_conv && cur.conv.residual <= tol_conv;

  RunOutcome out{TimeLimitVerdict{}, {}, s0, 0, {}};
  SupportState state = s0;
  double v2_running = std::pow(cur.kappa_max, 2.0 * params.alpha);
  double last_sample_kappa = 0.0;
  double running_max_kappa = 0.0;
  double last_dt = 0.0;

  auto record = [&](const SupportState& s) {
    if (!out.series.empty() && out.series.back().t == s.t && out.series.back().step == out.steps)
      return;
    SnapshotOptions so;
    so.dt = last_dt;
    so.step = out.steps;
    so.v2_running_max = v2_running;
    so.symmetry_order = opts.symmetry_order;
    Diagnostics d = snapshot(s, params, so);
    last_sample_kappa = d.kappa_max;
    if (d.kappa_max >= running_max_kappa) {
      running_max_kappa = d.kappa_max;
      if (opts.record_running_max_states && opts.running_max_states)
        opts.running_max_states->push_back(s);
    }
    if (opts.on_sample) opts.on_sample(s, d);
    out.series.push_back(std::move(d));
  };

  // kappa_max strictly increasing over the trailing window of samples.
  auto window_increasing = [&]() {
    const std::size_t n = out.series.size();
    const std::size_t w = static_cast<std::size_t>(std::max(opts.witness_window, 2));
    if (n < 2) return false;
    const std::size_t start = n > w ? n - w : 0;
    for (std::size_t k = start + 1; k < n; ++k)
      if (!(out.series[k].kappa_max > out.series[k - 1].kappa_max)) return false;
    return true;
  };

  auto stop_blowup = [&](BlowUpWitness witness, std::string detail) {
    record(state);
    BlowUpVerdict b;
    b.t_stop = state.t;
    b.kappa_max = cur.kappa_max;
    b.witness = witness;
    b.detail = std::move(detail);
    b.shrinking = witness == BlowUpWitness::ShrinkToPoint;
    b.certified = witness == BlowUpWitness::KappaThreshold || window_increasing();
    if (!b.certified)
      out.notes.push_back("blow-up witness '" + std::string(to_string(witness)) +
                          "' not certified: kappa_max not strictly increasing over the trailing " +
                          std::to_string(opts.witness_window) + " samples");
    out.verdict = b;
  };

  record(state);
  long long sample_index = 1;
  auto next_sample_time = [&]() { return static_cast<double>(sample_index) * ctl.sample_interval; };
  const double t_eps = 1e-12 * ctl.t_end;

  while (true) {
    if (state.t >= ctl.t_end - t_eps) {
      record(state);
      out.verdict = TimeLimitVerdict{};
      break;
    }
    const double cap = std::min(next_sample_time(), ctl.t_end) - state.t;
    const double dt_stable = stable_dt(state.grid(), cur.kappa_max, params, ctl);
    if (dt_stable < ctl.dt_min) {
      std::ostringstream os;
      os << "stable step " << dt_stable << " below dt_min " << ctl.dt_min << " at kappa_max "
         << cur.kappa_max;
      stop_blowup(BlowUpWitness::StepFloor, os.str());
      break;
    }

    double dt = std::min(dt_stable, cap);
    std::optional<SupportState> next;
    Measured next_measure;
    std::string failure;
    while (!next) {
      try {
        SupportState trial = rk4_step(state, params, dt);
        next_measure = measure(trial, params);
        next = std::move(trial);
      } catch (const ConvexityError& e) {
        failure = e.what();
      } catch (const NonFiniteError& e) {
        failure = e.what();
      }
      if (next) break;
      dt *= 0.5;
      if (dt < ctl.dt_min) break;
    }
    if (!next) {
      stop_blowup(BlowUpWitness::ConvexityLoss, failure);
      break;
    }

    state = std::move(*next);
    cur = next_measure;
    last_dt = dt;
    ++out.steps;
    v2_running = std::max(v2_running, std::pow(cur.kappa_max, 2.0 * params.alpha));

    if (cur.kappa_max >= ctl.kappa_blowup) {
      std::ostringstream os;
      os << "kappa_max " << cur.kappa_max << " >= kappa_blowup " << ctl.kappa_blowup;
      stop_blowup(BlowUpWitness::KappaThreshold, os.str());
      break;
    }
    if (cur.L < opts.shrink_fraction * L0 && cur.kappa_max > last_sample_kappa) {
      std::ostringstream os;
      os << "length " << cur.L << " fell below " << opts.shrink_fraction << " L0";
      stop_blowup(BlowUpWitness::ShrinkToPoint, os.str());
      break;
    }
    if (!starts_converged && cur.conv.shape_error <= tol_conv && cur.conv.residual <= tol_conv) {
      record(state);
      out.verdict = ConvergedVerdict{cur.conv.r_inf, cur.conv.shape_error, cur.conv.residual};
      break;
    }
    const bool on_cadence = state.t >= next_sample_time() - t_eps;
    if (on_cadence) {
      while (next_sample_time() <= state.t + t_eps) ++sample_index;
    }
    if (on_cadence || cur.kappa_max >= opts.growth_sample_factor * last_sample_kappa)
      record(state);
  }
  out.final_state = state;
  return out;
}

}  // namespace curveflow
