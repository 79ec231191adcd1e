#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "fft.hpp"

namespace curveflow {

PeriodicGrid::PeriodicGrid(int m, int samples, int min_samples) : m_(m), samples_(samples) {
  if (m < 1) throw SpecError("turning number m must be >= 1, got " + std::to_string(m));
  if (samples % 2 != 0)
    throw SpecError("sample count N must be even, got " + std::to_string(samples));
  if (samples < min_samples)
    throw SpecError("sample count N must be >= " + std::to_string(min_samples) + ", got " +
                    std::to_string(samples));
  dtheta_ = 2.0 * m * std::numbers::pi / samples;
}

std::vector<double> PeriodicGrid::thetas() const {
  std::vector<double> t(static_cast<std::size_t>(samples_));
  for (int j = 0; j < samples_; ++j) t[static_cast<std::size_t>(j)] = theta(j);
  return t;
}

PeriodicGrid build_grid(int m, int samples) { return {m, samples}; }

PeriodicField::PeriodicField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw SpecError("field has " + std::to_string(values_.size()) + " samples, grid has " +
                    std::to_string(grid_.size()));
  // v * 0 is NaN exactly when v is not finite; the sum vectorizes.
  double probe = 0.0;
  for (double v : values_) probe += v * 0.0;
  if (probe != 0.0)
    for (std::size_t j = 0; j < values_.size(); ++j)
      if (!std::isfinite(values_[j]))
        throw NonFiniteError("non-finite sample at index " + std::to_string(j));
}

PeriodicField PeriodicField::constant(const PeriodicGrid& grid, double c) {
  return {grid, std::vector<double>(static_cast<std::size_t>(grid.size()), c)};
}

double PeriodicField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PeriodicField::max() const { return *std::max_element(values_.begin(), values_.end()); }

Spectrum spectrum(const PeriodicField& f) {
  Spectrum c(static_cast<std::size_t>(f.size() / 2 + 1));
  fft::forward(f.values(), c);
  return c;
}

PeriodicField from_spectrum(const PeriodicGrid& grid, const Spectrum& c) {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  fft::inverse(c, v);
  return {grid, std::move(v)};
}

double spectral_norm(const Spectrum& c, int samples) {
  const int nyq = samples / 2;
  double s = std::norm(c[0]) + std::norm(c[static_cast<std::size_t>(nyq)]);
  for (int k = 1; k < nyq; ++k) s += 2.0 * std::norm(c[static_cast<std::size_t>(k)]);
  return std::sqrt(s);
}

PeriodicField differentiate(const PeriodicField& f, int order) {
  if (order != 1 && order != 2)
    throw SpecError("derivative order must be 1 or 2, got " + std::to_string(order));
  const PeriodicGrid& g = f.grid();
  Spectrum c = spectrum(f);
  const int nyq = g.size() / 2;
  for (int k = 0; k <= nyq; ++k) {
    const double w = g.frequency(k);
    auto& ck = c[static_cast<std::size_t>(k)];
    if (order == 1)
      ck = (k == nyq) ? 0.0 : std::complex<double>(0.0, w) * ck;
    else
      ck *= -w * w;
  }
  return from_spectrum(g, c);
}

double integrate_periodic(const PeriodicField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().dtheta();
}

double resonant_fraction(const PeriodicField& f) {
  const PeriodicGrid& g = f.grid();
  const int m = g.m();
  if (m >= g.size() / 2) return 0.0;  // frequency one is not resolved
  const Spectrum c = spectrum(f);
  const double norm = spectral_norm(c, g.size());
  if (norm == 0.0) return 0.0;
  return std::sqrt(2.0) * std::abs(c[static_cast<std::size_t>(m)]) / norm;
}

PeriodicField invert_helmholtz(const PeriodicField& f, double resonance_tol) {
  const PeriodicGrid& g = f.grid();
  Spectrum c = spectrum(f);
  const int nyq = g.size() / 2;
  const int m = g.m();
  if (m < nyq) {
    const double norm = spectral_norm(c, g.size());
    const double resonant = std::sqrt(2.0) * std::abs(c[static_cast<std::size_t>(m)]);
    if (resonant > resonance_tol * norm)
      throw ResonanceError("frequency-one content " + std::to_string(resonant) +
                           " exceeds tolerance (relative " + std::to_string(resonant / norm) +
                           ")");
  }
  for (int k = 0; k <= nyq; ++k) {
    auto& ck = c[static_cast<std::size_t>(k)];
    if (k == m) {
      ck = 0.0;
      continue;
    }
    const double w = g.frequency(k);
    ck /= 1.0 - w * w;
  }
  return from_spectrum(g, c);
}

double evaluate_at(const PeriodicField& f, double theta) {
  const PeriodicGrid& g = f.grid();
  const Spectrum c = spectrum(f);
  const int nyq = g.size() / 2;
  double s = c[0].real();
  for (int k = 1; k < nyq; ++k) {
    const double phase = g.frequency(k) * theta;
    const auto& ck = c[static_cast<std::size_t>(k)];
    s += 2.0 * (ck.real() * std::cos(phase) - ck.imag() * std::sin(phase));
  }
  // Nyquist mode interpolated symmetrically (cosine part only).
  s += c[static_cast<std::size_t>(nyq)].real() * std::cos(g.frequency(nyq) * theta);
  return s;
}

namespace {

// Value and first two derivatives of the trigonometric interpolant.
struct Jet {
  double f = 0.0, d1 = 0.0, d2 = 0.0;
};

Jet jet_at(const PeriodicGrid& g, const Spectrum& c, double theta) {
  const int nyq = g.size() / 2;
  Jet out{c[0].real(), 0.0, 0.0};
  for (int k = 1; k <= nyq; ++k) {
    const double w = g.frequency(k);
    const double cs = std::cos(w * theta), sn = std::sin(w * theta);
    const auto& ck = c[static_cast<std::size_t>(k)];
    const double re = k == nyq ? ck.real() : 2.0 * ck.real();
    const double im = k == nyq ? 0.0 : 2.0 * ck.imag();
    out.f += re * cs - im * sn;
    out.d1 += w * (-re * sn - im * cs);
    out.d2 += w * w * (-re * cs + im * sn);
  }
  return out;
}

}  // namespace

double interpolated_max(const PeriodicField& f) {
  const PeriodicGrid& g = f.grid();
  const auto vals = f.values();
  const auto it = std::max_element(vals.begin(), vals.end());
  const double grid_max = *it;
  const double theta0 = g.theta(static_cast<int>(it - vals.begin()));
  const Spectrum c = spectrum(f);
  double theta = theta0;
  double best = grid_max;
  for (int iter = 0; iter < 30; ++iter) {
    const Jet j = jet_at(g, c, theta);
    best = std::max(best, j.f);
    if (!(j.d2 < 0.0)) break;
    const double step = -j.d1 / j.d2;
    theta = std::clamp(theta + step, theta0 - g.dtheta(), theta0 + g.dtheta());
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(theta))) {
      best = std::max(best, jet_at(g, c, theta).f);
      break;
    }
  }
  return best;
}

}  // namespace curveflow
