#include "curve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "power.hpp"

namespace curveflow {

using std::numbers::pi;

std::string_view to_string(FlowKind kind) {
  return kind == FlowKind::AreaPreserving ? "AP" : "LP";
}

FlowKind parse_flow_kind(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (t == "AP" || t == "AREA-PRESERVING" || t == "AREA_PRESERVING") return FlowKind::AreaPreserving;
  if (t == "LP" || t == "LENGTH-PRESERVING" || t == "LENGTH_PRESERVING")
    return FlowKind::LengthPreserving;
  throw SpecError("unknown flow kind '" + std::string(text) + "' (expected AP or LP)");
}

void FlowParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw SpecError("alpha must be a finite positive number, got " + std::to_string(alpha));
  if (m < 1) throw SpecError("turning number m must be >= 1, got " + std::to_string(m));
}

double cosine_convexity_margin(const CosinePerturbed& c, int m) {
  const double k = static_cast<double>(c.n) / m;
  return c.a - std::abs(c.b) * std::abs(1.0 - k * k);
}

void CurveSpec::validate() const {
  if (m < 1) throw SpecError("turning number m must be >= 1, got " + std::to_string(m));
  if (const auto* c = std::get_if<MFoldCircle>(&shape)) {
    if (!(c->r > 0.0)) throw SpecError("circle radius must be positive");
  } else if (const auto* c = std::get_if<CosinePerturbed>(&shape)) {
    if (!(c->a > 0.0)) throw SpecError("cosine family needs a > 0");
    if (c->n < 1) throw SpecError("cosine family needs n >= 1");
    if (!std::isfinite(c->b)) throw SpecError("cosine amplitude b must be finite");
    const double margin = cosine_convexity_margin(*c, m);
    if (!(margin > 0.0))
      throw ConvexityError("h + h_thth has minimum " + std::to_string(margin) +
                           " <= 0 for the requested cosine curve");
  } else if (const auto* c = std::get_if<FromSamples>(&shape)) {
    if (c->h.empty()) throw SpecError("sample list is empty");
  }
}

CurveSpec load_support_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open support samples '" + path.string() + "'");
  std::string line;
  int line_no = 0;
  int m = 0;
  int samples = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    if (!(ss >> m >> samples)) throw ParseError("expected header 'm N'", line_no);
    break;
  }
  if (samples <= 0 || m < 1) throw ParseError("invalid header: need m >= 1 and N > 0", line_no);
  FromSamples fs;
  fs.h.reserve(static_cast<std::size_t>(samples));
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    double v = 0.0;
    if (!(ss >> v)) throw ParseError("expected a real support value", line_no);
    fs.h.push_back(v);
  }
  if (static_cast<int>(fs.h.size()) != samples)
    throw ParseError("header announces " + std::to_string(samples) + " values, file has " +
                         std::to_string(fs.h.size()),
                     line_no);
  return {fs, m};
}

PeriodicField radius_of_curvature(const SupportState& s) {
  const PeriodicField hpp = differentiate(s.h, 2);
  std::vector<double> rho(static_cast<std::size_t>(s.h.size()));
  for (int j = 0; j < s.h.size(); ++j) rho[static_cast<std::size_t>(j)] = s.h[j] + hpp[j];
  return {s.grid(), std::move(rho)};
}

double convexity_margin(const SupportState& s) { return radius_of_curvature(s).min(); }

SupportState generate_support(const CurveSpec& spec, int samples) {
  spec.validate();
  const PeriodicGrid grid(spec.m, samples);
  SupportState s{PeriodicField::constant(grid, 0.0), 0.0};
  if (const auto* c = std::get_if<MFoldCircle>(&spec.shape)) {
    s.h = PeriodicField::constant(grid, c->r);
  } else if (const auto* c = std::get_if<CosinePerturbed>(&spec.shape)) {
    const double k = static_cast<double>(c->n) / spec.m;
    s.h = PeriodicField::sample(grid, [&](double th) { return c->a + c->b * std::cos(k * th); });
  } else {
    const auto& fs = std::get<FromSamples>(spec.shape);
    if (static_cast<int>(fs.h.size()) != samples)
      throw SpecError("sampled curve has " + std::to_string(fs.h.size()) +
                      " values but the grid needs " + std::to_string(samples));
    s.h = PeriodicField(grid, fs.h);
  }
  const double margin = convexity_margin(s);
  if (!(margin > 0.0))
    throw ConvexityError("initial curve is not locally convex: min(h + h_thth) = " +
                         std::to_string(margin));
  return s;
}

CurvatureState curvature_of(const SupportState& s, double alpha) {
  const PeriodicField rho = radius_of_curvature(s);
  if (!(rho.min() > 0.0))
    throw ConvexityError("min(h + h_thth) = " + std::to_string(rho.min()) + " <= 0 at t = " +
                         std::to_string(s.t));
  return {rho.map(Power(-alpha)), s.t};
}

SupportState support_of(const CurvatureState& c, double alpha, double resonance_tol) {
  if (!(c.v.min() > 0.0)) throw ConvexityError("v = kappa^alpha must be positive");
  const PeriodicField rho = c.v.map(Power(-1.0 / alpha));
  return {invert_helmholtz(rho, resonance_tol), c.t};
}

GeometrySummary geometry(const SupportState& s) {
  const PeriodicGrid& g = s.grid();
  const PeriodicField hp = differentiate(s.h, 1);
  const PeriodicField rho = radius_of_curvature(s);

  GeometrySummary out;
  out.L = integrate_periodic(s.h);
  double area = 0.0;
  for (int j = 0; j < g.size(); ++j) area += s.h[j] * s.h[j] - hp[j] * hp[j];
  out.A = 0.5 * area * g.dtheta();
  out.convexity_margin = rho.min();
  if (out.convexity_margin > 0.0) {
    out.kappa_min = 1.0 / rho.max();
    out.kappa_max = 1.0 / out.convexity_margin;
  } else {
    out.kappa_min = out.kappa_max = std::numeric_limits<double>::quiet_NaN();
  }
  out.h_min = s.h.min();
  out.h_max = s.h.max();
  out.isop_gap = out.L * out.L - 4.0 * g.m() * pi * out.A;
  out.rado_gap = out.L * out.L - 4.0 * pi * std::abs(out.A);
  return out;
}

std::vector<Point2> reconstruct_points(const SupportState& s) {
  const PeriodicField hp = differentiate(s.h, 1);
  std::vector<Point2> pts(static_cast<std::size_t>(s.h.size()));
  for (int j = 0; j < s.h.size(); ++j) {
    const double th = s.grid().theta(j);
    const double c = std::cos(th);
    const double sn = std::sin(th);
    pts[static_cast<std::size_t>(j)] = {s.h[j] * c - hp[j] * sn, s.h[j] * sn + hp[j] * c};
  }
  return pts;
}

double closure_defect(const CurvatureState& c, double alpha) {
  const PeriodicGrid& g = c.grid();
  double re = 0.0;
  double im = 0.0;
  const Power pw(-1.0 / alpha);
  for (int j = 0; j < g.size(); ++j) {
    const double rho = pw(c.v[j]);
    re += rho * std::cos(g.theta(j));
    im += rho * std::sin(g.theta(j));
  }
  return std::hypot(re, im) * g.dtheta();
}

std::string_view to_string(CurveClass c) {
  switch (c) {
    case CurveClass::HighlySymmetric:
      return "HighlySymmetric";
    case CurveClass::ALType:
      return "ALType";
    case CurveClass::Unclassified:
      break;
  }
  return "Unclassified";
}

namespace {

// Spectrum of h with the translation (frequency-one) coefficient removed.
Spectrum shape_spectrum(const SupportState& s) {
  Spectrum c = spectrum(s.h);
  const int m = s.grid().m();
  if (m <= s.h.size() / 2) c[static_cast<std::size_t>(m)] = 0.0;
  return c;
}

bool even_about_zero(std::span<const double> f, double tol) {
  const std::size_t n = f.size();
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  for (std::size_t j = 1; j < n; ++j)
    if (std::abs(f[j] - f[n - j]) > tol * scale) return false;
  return true;
}

}  // namespace

int detect_symmetry_order(const SupportState& s, double tol) {
  const Spectrum c = shape_spectrum(s);
  const double norm = spectral_norm(c, s.h.size());
  int order = 0;
  for (std::size_t k = 1; k < c.size(); ++k)
    if (std::abs(c[k]) > tol * norm) order = std::gcd(order, static_cast<int>(k));
  return order;
}

bool property_p_holds(const SupportState& s, int n, double tol) {
  if (n < 1) return false;
  const PeriodicGrid& g = s.grid();
  const Spectrum shape = shape_spectrum(s);
  const PeriodicField h = from_spectrum(g, shape);
  const PeriodicField rho = radius_of_curvature({h, s.t});
  if (!(rho.min() > 0.0)) return false;
  const PeriodicField kappa = rho.map([](double r) { return 1.0 / r; });

  // Evenness about 0 together with n-fold symmetry gives evenness about m pi / n.
  const double norm = spectral_norm(shape, g.size());
  for (std::size_t k = 1; k < shape.size(); ++k)
    if (static_cast<int>(k) % n != 0 && std::abs(shape[k]) > kSymmetryTol * norm) return false;
  if (!even_about_zero(h.values(), kSymmetryTol)) return false;
  if (!even_about_zero(kappa.values(), kSymmetryTol)) return false;

  const double half_window = g.m() * std::numbers::pi / n;
  const PeriodicField hp = differentiate(h, 1);
  const PeriodicField kp = differentiate(kappa, 1);
  const double h_scale = std::max(std::abs(h.min()), std::abs(h.max()));
  const double k_scale = kappa.max();
  bool interior = false;
  for (int j = 1; g.theta(j) < half_window - 1e-12 * half_window; ++j) {
    interior = true;
    if (hp[j] > tol * h_scale) return false;
    if (kp[j] > tol * k_scale) return false;
  }
  if (!interior) return false;
  return evaluate_at(h, half_window) > 0.0;
}

ClassReport classify(const SupportState& s, std::optional<int> n) {
  ClassReport r;
  r.m = s.grid().m();
  r.n = n.value_or(detect_symmetry_order(s));
  r.coprime = r.n > 0 && std::gcd(r.m, r.n) == 1;
  if (r.n <= 0) return r;
  r.property_p = property_p_holds(s, r.n);
  if (r.n > 2 * r.m)
    r.membership = CurveClass::HighlySymmetric;
  else if (r.n > r.m && r.n < 2 * r.m && r.property_p)
    r.membership = CurveClass::ALType;
  return r;
}

}  // namespace curveflow
