#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curve.hpp"

namespace curveflow {

// One time-stamped record of every monitored scalar.
struct Diagnostics {
  double t = 0.0;
  double dt = 0.0;
  double L = 0.0;
  double A = 0.0;
  double lambda = 0.0;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double E = 0.0;      // int v_th^2 - int (v - vbar)^2
  double F_int = 0.0;  // int kappa^alpha dtheta
  double psi_max = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double h_ratio = 0.0;
  double isop_gap = 0.0;
  double rado_gap = 0.0;
  double convexity_margin = 0.0;
  // Only meaningful for the curvature engine; NaN otherwise.
  double closure_defect = std::numeric_limits<double>::quiet_NaN();
  std::optional<bool> propP_holds;

  // max_I v^2 at this instant, and its running maximum over every accepted
  // step up to this instant (the left-hand side of the gradient estimate).
  double v2_max = 0.0;
  double v2_running_max = 0.0;
  std::size_t step = 0;
};

struct SnapshotOptions {
  double dt = 0.0;
  std::size_t step = 0;
  // Defaults to v2_max of the snapshot itself.
  std::optional<double> v2_running_max;
  // When set, property (P) is evaluated for this symmetry order.
  std::optional<int> symmetry_order;
};

Diagnostics snapshot(const SupportState& s, const FlowParams& params,
                     const SnapshotOptions& opts = {});
// Oracle-engine snapshot: the support function is recovered with support_of
// and closure_defect is filled in.
Diagnostics snapshot(const CurvatureState& c, const FlowParams& params,
                     const SnapshotOptions& opts = {});

// E = int (v_th)^2 - int (v - vbar)^2 by direct quadrature.
double lyapunov_energy(const PeriodicField& v);
// Same quantity from the Fourier coefficients of v.
double lyapunov_energy_parseval(const PeriodicField& v);

struct MonitorCheck {
  std::string name;
  double worst = 0.0;  // worst violation magnitude (<= 0 means margin)
  double t_worst = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  bool reported_only = false;  // informational; never fails a report
  std::string detail;
};

struct MonitorReport {
  std::vector<MonitorCheck> checks;

  bool all_passed() const;
  const MonitorCheck* find(std::string_view name) const;
};

struct MonitorTolerances {
  double per_sample = 1e-9;  // slack between consecutive samples, scale-relative
  double drift_rate = 1e-6;  // conserved-quantity drift per unit time
  double psi = 1e-8;         // gradient estimate, relative
  double rado = 1e-8;        // relative to L^2
};

struct MonitorContext {
  // Converged or TimeLimit: F_int boundedness is asserted, otherwise reported.
  bool global_existence = false;
  // Property (P) must hold at every sample (A-L presets).
  bool require_property_p = false;
  // Support values must stay in [lo, hi] (A-L presets).
  std::optional<std::pair<double, double>> support_window;
  double window_tol = 1e-8;
};

MonitorReport check_monotonicity(std::span<const Diagnostics> series, const FlowParams& params,
                                 const MonitorTolerances& tol = {},
                                 const MonitorContext& ctx = {});

struct RateIdentity {
  double finite_difference = 0.0;
  double closed_form = 0.0;
  double discrepancy = 0.0;
};

// Compares a one-sided difference of L (AP) or A (LP) over RK4 steps of size
// dt_probe with the closed-form rate integral. stencil = 3 takes two steps
// (truncation ~ dt^2 Q'''/3); stencil = 5 takes four (truncation ~ dt^4).
RateIdentity rate_identity(const SupportState& s, const FlowParams& params, double dt_probe,
                           int stencil = 5);
double rate_check(const SupportState& s, const FlowParams& params, double dt_probe);

// Closed-form rates dL/dt = -int (kappa^alpha - lambda) dtheta and
// dA/dt = -int (kappa^alpha - lambda) kappa^{-1} dtheta.
double length_rate(const SupportState& s, const FlowParams& params);
double area_rate(const SupportState& s, const FlowParams& params);

// Curvature spreading near running maxima: for every state (taken when
// kappa attains its running maximum) and every node within epsilon of the
// argmax, (1 - eps) v(th0) <= v(th) + eps sqrt(C), C = max(0, psi0_max - v(th0)^2).
MonitorReport spreading_check(std::span<const SupportState> states, const FlowParams& params,
                              double psi0_max, double epsilon = 0.1);

}  // namespace curveflow
