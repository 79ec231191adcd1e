#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curve.hpp"
#include "diagnostics.hpp"
#include "flow.hpp"
#include "run.hpp"

namespace curveflow {

enum class Expectation { Converged, BlowUp, TimeLimit, Explore };

std::string_view to_string(Expectation e);
Expectation parse_expectation(std::string_view text);

struct ScenarioConfig {
  std::string name;  // preset name or config file stem
  CurveSpec curve;
  FlowParams params;
  StepControl ctl;
  int N = 512;
  double tol_conv = 1e-3;
  Expectation expected = Expectation::Explore;
  std::filesystem::path out_dir = "out";
  std::vector<double> render_times;

  // Monitors specific to A-L type curves (property P, support window).
  bool monitor_al_shape = false;

  // Throws SpecError / ConvexityError.
  void validate() const;
};

struct Preset {
  std::string name;
  std::string clause;  // statement the preset exercises
  std::string description;
  CurveSpec curve;
  FlowKind kind;
  Expectation expected;
  double t_end;  // horizon at alpha = 1
  int N;
  bool al_shape = false;
};

inline constexpr double kDefaultAlphas[] = {0.5, 1.0, 2.0};

const std::vector<Preset>& list_presets();
const Preset* find_preset(std::string_view name);

// Closed-form algebraic area of the cosine family:
// m pi [a^2 + (b^2 / 2) (1 - (n/m)^2)].
double cosine_area(const CosinePerturbed& c, int m);

// Solves cosine_area(a, b, n, m) = 0 for a by bracketing root-finding.
double zero_area_offset(double b, int n, int m);

ScenarioConfig config_from_preset(const Preset& preset, double alpha);

// Flat "key = value" format with dotted keys and '#' comments.
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(std::string_view text, const std::string& name = "config");

// Exit-status contract of run_scenario.
enum ExitStatus : int {
  kExitOk = 0,
  kExitError = 1,
  kExitMismatch = 2,
  kExitInvariant = 3,
};

struct ScenarioResult {
  RunOutcome outcome;
  MonitorReport report;
  int exit_status = kExitOk;
  std::vector<std::filesystem::path> artifacts;
};

// Monitor context implied by a config (A-L window, global existence).
MonitorContext monitor_context(const ScenarioConfig& cfg, const SupportState& s0,
                               const RunOutcome& outcome);

// Runs the flow and writes timeseries.csv, snapshots.jsonl, curve_t*.svg and
// report.txt into cfg.out_dir. I/O failures throw IoError.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace curveflow
