#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "flow.hpp"

namespace curveflow {

using std::numbers::pi;

double lyapunov_energy(const PeriodicField& v) {
  const PeriodicField vp = differentiate(v, 1);
  const double mean = integrate_periodic(v) / v.grid().period();
  double grad = 0.0;
  double var = 0.0;
  for (int j = 0; j < v.size(); ++j) {
    grad += vp[j] * vp[j];
    var += (v[j] - mean) * (v[j] - mean);
  }
  return (grad - var) * v.grid().dtheta();
}

double lyapunov_energy_parseval(const PeriodicField& v) {
  const PeriodicGrid& g = v.grid();
  const Spectrum c = spectrum(v);
  const int nyq = g.size() / 2;
  double s = 0.0;
  for (int k = 1; k < nyq; ++k) {
    const double w = g.frequency(k);
    s += 2.0 * std::norm(c[static_cast<std::size_t>(k)]) * (w * w - 1.0);
  }
  // The first derivative drops the Nyquist mode, so it only enters the variance.
  s -= std::norm(c[static_cast<std::size_t>(nyq)]);
  return g.period() * s;
}

Diagnostics snapshot(const SupportState& s, const FlowParams& params,
                     const SnapshotOptions& opts) {
  const GeometrySummary geo = geometry(s);
  Diagnostics d;
  d.t = s.t;
  d.dt = opts.dt;
  d.step = opts.step;
  d.L = geo.L;
  d.A = geo.A;
  d.kappa_min = geo.kappa_min;
  d.kappa_max = geo.kappa_max;
  d.h_min = geo.h_min;
  d.h_max = geo.h_max;
  d.h_ratio = geo.h_max / geo.h_min;
  d.isop_gap = geo.isop_gap;
  d.rado_gap = geo.rado_gap;
  d.convexity_margin = geo.convexity_margin;

  const CurvatureState c = curvature_of(s, params.alpha);
  d.lambda = lambda_of(c, params);
  d.E = lyapunov_energy(c.v);
  d.F_int = integrate_periodic(c.v);
  const PeriodicField vp = differentiate(c.v, 1);
  for (int j = 0; j < c.v.size(); ++j) {
    d.psi_max = std::max(d.psi_max, c.v[j] * c.v[j] + vp[j] * vp[j]);
  }
  // The peak of v usually falls between nodes; the grid maximum alone would
  // understate the right-hand side of the gradient estimate near blow-up.
  const double vmax = interpolated_max(c.v);
  d.v2_max = vmax * vmax;
  d.v2_running_max = std::max(d.v2_max, opts.v2_running_max.value_or(d.v2_max));
  if (opts.symmetry_order) d.propP_holds = property_p_holds(s, *opts.symmetry_order);
  return d;
}

Diagnostics snapshot(const CurvatureState& c, const FlowParams& params,
                     const SnapshotOptions& opts) {
  const SupportState s = support_of(c, params.alpha);
  Diagnostics d = snapshot(s, params, opts);
  d.closure_defect = closure_defect(c, params.alpha);
  return d;
}

bool MonitorReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const MonitorCheck& c) { return c.passed || c.reported_only; });
}

const MonitorCheck* MonitorReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

// Accumulates the worst value of (observed - allowed) over a series.
struct Worst {
  MonitorCheck check;

  Worst(std::string name, double tolerance) {
    check.name = std::move(name);
    check.tolerance = tolerance;
    check.worst = -std::numeric_limits<double>::infinity();
  }

  // excess > 0 is a violation.
  void observe(double excess, double t) {
    if (std::isnan(excess)) excess = std::numeric_limits<double>::infinity();
    if (excess > check.worst) {
      check.worst = excess;
      check.t_worst = t;
    }
  }

  MonitorCheck finish(std::string detail = {}) {
    check.passed = !(check.worst > 0.0);
    check.detail = std::move(detail);
    return check;
  }
};

}  // namespace

MonitorReport check_monotonicity(std::span<const Diagnostics> series, const FlowParams& params,
                                 const MonitorTolerances& tol, const MonitorContext& ctx) {
  MonitorReport report;
  if (series.empty()) return report;
  const Diagnostics& first = series.front();
  const bool ap = params.kind == FlowKind::AreaPreserving;
  const double four_m_pi = 4.0 * params.m * pi;

  if (ap) {
    Worst cons("area_conserved", tol.drift_rate);
    const double scale = std::max(std::abs(first.A), first.L * first.L);
    for (const auto& d : series)
      cons.observe(std::abs(d.A - first.A) - tol.drift_rate * std::max(d.t, 1.0) * scale, d.t);
    report.checks.push_back(cons.finish("|A - A0| <= drift_rate max(t,1) max(|A0|, L0^2)"));

    Worst mono("length_nonincreasing", tol.per_sample);
    for (std::size_t k = 1; k < series.size(); ++k)
      mono.observe(series[k].L - series[k - 1].L - tol.per_sample * series[k - 1].L, series[k].t);
    if (series.size() == 1) mono.observe(-1.0, first.t);
    report.checks.push_back(mono.finish("L(t_k+1) <= L(t_k) (1 + tol)"));
  } else {
    Worst cons("length_conserved", tol.drift_rate);
    for (const auto& d : series)
      cons.observe(std::abs(d.L - first.L) - tol.drift_rate * std::max(d.t, 1.0) * first.L, d.t);
    report.checks.push_back(cons.finish("|L - L0| <= drift_rate max(t,1) L0"));

    Worst mono("area_nondecreasing", tol.per_sample);
    for (std::size_t k = 1; k < series.size(); ++k) {
      const double scale = series[k - 1].L * series[k - 1].L / four_m_pi;
      mono.observe(series[k - 1].A - series[k].A - tol.per_sample * scale, series[k].t);
    }
    if (series.size() == 1) mono.observe(-1.0, first.t);
    report.checks.push_back(mono.finish("A(t_k+1) >= A(t_k) - tol L^2/(4 m pi)"));

    Worst energy("energy_nonincreasing", tol.per_sample);
    for (std::size_t k = 1; k < series.size(); ++k)
      energy.observe(series[k].E - series[k - 1].E -
                         tol.per_sample * (1.0 + std::abs(series[k - 1].E)),
                     series[k].t);
    if (series.size() == 1) energy.observe(-1.0, first.t);
    report.checks.push_back(energy.finish("E(t_k+1) <= E(t_k) + tol (1 + |E(t_k)|)"));
  }

  {
    Worst psi("gradient_estimate", tol.psi);
    for (const auto& d : series) {
      const double bound = std::max(d.v2_running_max, first.psi_max);
      psi.observe(d.psi_max - bound - tol.psi * bound, d.t);
    }
    report.checks.push_back(psi.finish("max psi <= max(running max v^2, max psi(0)) (1 + tol)"));
  }
  {
    Worst rado("rado_inequality", tol.rado);
    for (const auto& d : series) rado.observe(-d.rado_gap - tol.rado * d.L * d.L, d.t);
    report.checks.push_back(rado.finish("L^2 - 4 pi |A| >= -tol L^2"));
  }
  {
    Worst convex("convexity", 0.0);
    for (const auto& d : series) convex.observe(d.convexity_margin > 0.0 ? -1.0 : 1.0, d.t);
    report.checks.push_back(convex.finish("min(h + h_thth) > 0 at every sample"));
  }
  {
    // At an m-fold circle F equals C0 = (2 m pi)^{alpha+1} L^{-alpha}; the
    // eventual bound is 2 C0.
    const Diagnostics& last = series.back();
    const double c0 = std::pow(2.0 * params.m * pi, params.alpha + 1.0) *
                      std::pow(last.L, -params.alpha);
    Worst f("F_int_bounded", 2.0 * c0);
    f.observe(last.F_int - 2.0 * c0, last.t);
    double running = 0.0;
    for (const auto& d : series) running = std::max(running, d.F_int);
    std::ostringstream os;
    os << "final F = " << last.F_int << ", bound 2 C0 = " << 2.0 * c0 << ", running max F = "
       << running;
    MonitorCheck c = f.finish(os.str());
    c.reported_only = !ctx.global_existence;
    report.checks.push_back(c);
  }
  {
    MonitorCheck c;
    c.name = "h_ratio";
    c.reported_only = true;
    double running = -std::numeric_limits<double>::infinity();
    for (const auto& d : series)
      if (d.h_ratio > running) {
        running = d.h_ratio;
        c.t_worst = d.t;
      }
    c.worst = running;
    c.detail = "running max of sup h / inf h";
    report.checks.push_back(c);
  }
  if (ctx.require_property_p) {
    Worst p("property_p", 0.0);
    for (const auto& d : series) p.observe(d.propP_holds.value_or(false) ? -1.0 : 1.0, d.t);
    report.checks.push_back(p.finish("symmetry and monotone window at every sample"));
  }
  if (ctx.support_window) {
    const auto [lo, hi] = *ctx.support_window;
    Worst w("support_window", ctx.window_tol);
    for (const auto& d : series) {
      w.observe(lo - d.h_min - ctx.window_tol, d.t);
      w.observe(d.h_max - hi - ctx.window_tol, d.t);
    }
    report.checks.push_back(w.finish("h0(m pi/n) <= h <= h0(0)"));
  }
  return report;
}

double length_rate(const SupportState& s, const FlowParams& params) {
  const CurvatureState c = curvature_of(s, params.alpha);
  const double lambda = lambda_of(c, params);
  return -integrate_periodic(c.v.map([lambda](double v) { return v - lambda; }));
}

double area_rate(const SupportState& s, const FlowParams& params) {
  const PeriodicField rho = radius_of_curvature(s);
  const double lambda = lambda_of(s, params);
  const double a = params.alpha;
  return -integrate_periodic(rho.map([&](double r) { return (std::pow(r, -a) - lambda) * r; }));
}

RateIdentity rate_identity(const SupportState& s, const FlowParams& params, double dt_probe,
                           int stencil) {
  if (stencil != 3 && stencil != 5) throw SpecError("rate stencil must use 3 or 5 points");
  const bool ap = params.kind == FlowKind::AreaPreserving;
  const PeriodicField& h0 = s.h;
  const PeriodicField h0t = differentiate(h0, 1);
  // Q_i - Q_0 from field differences, so the large common part cancels exactly.
  auto increment = [&](const SupportState& x) {
    std::vector<double> dq(static_cast<std::size_t>(h0.size()));
    if (ap) {
      for (int j = 0; j < h0.size(); ++j) dq[static_cast<std::size_t>(j)] = x.h[j] - h0[j];
    } else {
      const PeriodicField xt = differentiate(x.h, 1);
      for (int j = 0; j < h0.size(); ++j)
        dq[static_cast<std::size_t>(j)] =
            0.5 * ((x.h[j] - h0[j]) * (x.h[j] + h0[j]) - (xt[j] - h0t[j]) * (xt[j] + h0t[j]));
    }
    return integrate_periodic(PeriodicField(h0.grid(), std::move(dq)));
  };
  std::vector<double> dq{0.0};
  SupportState x = s;
  for (int i = 1; i < stencil; ++i) {
    x = rk4_step(x, params, dt_probe);
    dq.push_back(increment(x));
  }
  RateIdentity r;
  if (stencil == 3)
    r.finite_difference = (4.0 * dq[1] - dq[2]) / (2.0 * dt_probe);
  else
    r.finite_difference =
        (48.0 * dq[1] - 36.0 * dq[2] + 16.0 * dq[3] - 3.0 * dq[4]) / (12.0 * dt_probe);
  r.closed_form = ap ? length_rate(s, params) : area_rate(s, params);
  r.discrepancy = std::abs(r.finite_difference - r.closed_form);
  return r;
}

double rate_check(const SupportState& s, const FlowParams& params, double dt_probe) {
  return rate_identity(s, params, dt_probe).discrepancy;
}

MonitorReport spreading_check(std::span<const SupportState> states, const FlowParams& params,
                              double psi0_max, double epsilon) {
  Worst w("curvature_spreading", epsilon);
  for (const auto& s : states) {
    const CurvatureState c = curvature_of(s, params.alpha);
    const auto vals = c.v.values();
    const auto it = std::max_element(vals.begin(), vals.end());
    const int j0 = static_cast<int>(it - vals.begin());
    const double v0 = *it;
    const double slack = epsilon * std::sqrt(std::max(0.0, psi0_max - v0 * v0));
    const PeriodicGrid& g = s.grid();
    const double period = g.period();
    for (int j = 0; j < g.size(); ++j) {
      double dist = std::abs(g.theta(j) - g.theta(j0));
      dist = std::min(dist, period - dist);
      if (dist >= epsilon) continue;
      w.observe(((1.0 - epsilon) * v0 - vals[static_cast<std::size_t>(j)] - slack) / v0, s.t);
    }
  }
  if (states.empty()) w.observe(-1.0, 0.0);
  MonitorReport r;
  r.checks.push_back(w.finish("(1 - eps) v(th0) <= v(th) + eps sqrt(C) for |th - th0| < eps"));
  return r;
}

}  // namespace curveflow
