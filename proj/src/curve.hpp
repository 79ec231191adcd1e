#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "grid.hpp"

namespace curveflow {

enum class FlowKind { AreaPreserving, LengthPreserving };

std::string_view to_string(FlowKind kind);
// Accepts "AP"/"LP" (any case) and the long names.
FlowKind parse_flow_kind(std::string_view text);

struct FlowParams {
  double alpha = 1.0;
  int m = 1;
  FlowKind kind = FlowKind::AreaPreserving;

  // Exponent p = 1 + 1/alpha of the v = kappa^alpha equation.
  double p() const noexcept { return 1.0 + 1.0 / alpha; }
  void validate() const;
};

// Support function h(theta, t) sampled at one time instant.
struct SupportState {
  PeriodicField h;
  double t = 0.0;

  const PeriodicGrid& grid() const noexcept { return h.grid(); }
};

// v = kappa^alpha sampled at one time instant.
struct CurvatureState {
  PeriodicField v;
  double t = 0.0;

  const PeriodicGrid& grid() const noexcept { return v.grid(); }
};

struct MFoldCircle {
  double r = 1.0;
};

// h(theta) = a + b cos(n theta / m).
struct CosinePerturbed {
  double a = 1.0;
  double b = 0.0;
  int n = 1;
};

struct FromSamples {
  std::vector<double> h;
};

struct CurveSpec {
  std::variant<MFoldCircle, CosinePerturbed, FromSamples> shape;
  int m = 1;

  // Throws SpecError / ConvexityError for shapes that cannot be sampled.
  void validate() const;
};

// Closed-form min(h + h_thth) of the cosine family: a - |b| |1 - (n/m)^2|.
double cosine_convexity_margin(const CosinePerturbed& c, int m);

// Reads the plain-text sample format: "m N" on the first line, then N values.
CurveSpec load_support_samples(const std::filesystem::path& path);

SupportState generate_support(const CurveSpec& spec, int samples);

// Radius of curvature 1/kappa = h + h_thth.
PeriodicField radius_of_curvature(const SupportState& s);
double convexity_margin(const SupportState& s);

CurvatureState curvature_of(const SupportState& s, double alpha);

// Inverts curvature_of, centring the curve at its Steiner point.
SupportState support_of(const CurvatureState& c, double alpha,
                        double resonance_tol = kDefaultResonanceTol);

struct GeometrySummary {
  double L = 0.0;
  double A = 0.0;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double convexity_margin = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double isop_gap = 0.0;  // L^2 - 4 m pi A
  double rado_gap = 0.0;  // L^2 - 4 pi |A|
};

// kappa extremes are NaN when the state is not locally convex.
GeometrySummary geometry(const SupportState& s);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// X(theta) = h u + h_theta u_perp, u = (cos theta, sin theta).
std::vector<Point2> reconstruct_points(const SupportState& s);

// |int_I kappa^{-1} e^{i theta} dtheta|; zero iff the curvature field closes.
double closure_defect(const CurvatureState& c, double alpha);

enum class CurveClass { HighlySymmetric, ALType, Unclassified };

std::string_view to_string(CurveClass c);

struct ClassReport {
  int m = 1;
  // Detected symmetry order; 0 when h has no non-constant shape modes.
  int n = 0;
  bool coprime = false;
  bool property_p = false;
  CurveClass membership = CurveClass::Unclassified;
};

inline constexpr double kSymmetryTol = 1e-8;
inline constexpr double kMonotoneTol = 1e-10;

// Largest n with h(theta + 2 m pi / n) = h(theta), read off the spectrum.
// Translation modes (frequency one) are ignored.
int detect_symmetry_order(const SupportState& s, double tol = kSymmetryTol);

// Property (P) for symmetry order n: h and kappa even about 0 and m pi / n,
// both decreasing on (0, m pi / n), h(m pi / n) > 0.
bool property_p_holds(const SupportState& s, int n, double tol = kMonotoneTol);

ClassReport classify(const SupportState& s, std::optional<int> n = std::nullopt);

}  // namespace curveflow
