#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "diagnostics.hpp"
#include "flow.hpp"

namespace curveflow {

enum class Verdict { Converged, BlowUp, TimeLimit };

std::string_view to_string(Verdict v);

enum class BlowUpWitness { KappaThreshold, StepFloor, ConvexityLoss, ShrinkToPoint };

std::string_view to_string(BlowUpWitness w);

struct ConvergedVerdict {
  double r_inf = 0.0;        // L / (2 m pi) at the final time
  double shape_error = 0.0;  // max |kappa L / (2 m pi) - 1|
  double residual = 0.0;     // max |kappa^alpha - lambda| / lambda
};

struct BlowUpVerdict {
  double t_stop = 0.0;
  double kappa_max = 0.0;
  BlowUpWitness witness = BlowUpWitness::KappaThreshold;
  // kappa_max >= kappa_blowup, or kappa_max strictly increasing over the
  // trailing sample window when the witness is the step floor or convexity loss.
  bool certified = false;
  bool shrinking = false;  // L fell below 1e-3 L0
  std::string detail;
};

struct TimeLimitVerdict {};

struct RunOutcome {
  std::variant<ConvergedVerdict, BlowUpVerdict, TimeLimitVerdict> verdict;
  std::vector<Diagnostics> series;
  SupportState final_state;
  std::size_t steps = 0;
  // Invariant reports raised while running (never swallowed silently).
  std::vector<std::string> notes;

  Verdict kind() const;
};

struct RunOptions {
  // Called for every recorded sample with the state it was computed from.
  std::function<void(const SupportState&, const Diagnostics&)> on_sample;
  // Extra sample whenever kappa_max grows by this factor since the last one.
  double growth_sample_factor = 1.1;
  // Trailing samples that must show strictly increasing kappa_max for an
  // uncertain stop (step floor, convexity loss) to count as certified.
  int witness_window = 10;
  // Property (P) is evaluated at every sample for this symmetry order.
  std::optional<int> symmetry_order;
  // Collect states at samples where kappa_max attains its running maximum.
  bool record_running_max_states = false;
  std::vector<SupportState>* running_max_states = nullptr;
  // Shrink-to-point threshold relative to L0.
  double shrink_fraction = 1e-3;
};

struct ConvergenceMeasure {
  double shape_error = 0.0;
  double residual = 0.0;
  double r_inf = 0.0;
};

ConvergenceMeasure convergence_measure(const SupportState& s, const FlowParams& params);

RunOutcome run(const SupportState& s0, const FlowParams& params, const StepControl& ctl,
               double tol_conv, const RunOptions& opts = {});

}  // namespace curveflow
