#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace curveflow {

// Uniform samples of the normal-angle circle I = [0, 2 m pi). The endpoint
// 2 m pi is not stored; every field on the grid is periodic by construction.
class PeriodicGrid {
public:
  static constexpr int kMinSamples = 16;

  // Throws SpecError unless m >= 1, N even and N >= min_samples.
  PeriodicGrid(int m, int samples, int min_samples = kMinSamples);

  int m() const noexcept { return m_; }
  int size() const noexcept { return samples_; }
  double dtheta() const noexcept { return dtheta_; }
  double period() const noexcept { return dtheta_ * samples_; }
  double theta(int j) const noexcept { return j * dtheta_; }
  std::vector<double> thetas() const;

  // Angular frequency (in radians^-1) of Fourier index k: k / m.
  double frequency(int k) const noexcept { return static_cast<double>(k) / m_; }

  bool operator==(const PeriodicGrid& o) const noexcept {
    return m_ == o.m_ && samples_ == o.samples_;
  }

private:
  int m_;
  int samples_;
  double dtheta_;
};

PeriodicGrid build_grid(int m, int samples);

// Real samples of a periodic function on a PeriodicGrid. Values are always
// finite; construction throws NonFiniteError otherwise.
class PeriodicField {
public:
  PeriodicField(PeriodicGrid grid, std::vector<double> values);

  template <class Fn>
  static PeriodicField sample(const PeriodicGrid& grid, Fn&& fn) {
    std::vector<double> v(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) v[static_cast<std::size_t>(j)] = fn(grid.theta(j));
    return {grid, std::move(v)};
  }
  static PeriodicField constant(const PeriodicGrid& grid, double c);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](int j) const noexcept { return values_[static_cast<std::size_t>(j)]; }
  int size() const noexcept { return grid_.size(); }

  double min() const;
  double max() const;

  // Applies fn to every sample and returns the result on the same grid.
  template <class Fn>
  PeriodicField map(Fn&& fn) const {
    std::vector<double> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(values_[j]);
    return {grid_, std::move(v)};
  }

private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

// Half-spectrum c_0..c_{N/2} with c_k = (1/N) sum_j f_j exp(-2 pi i jk/N).
// Index k corresponds to the mode exp(i k theta / m).
using Spectrum = std::vector<std::complex<double>>;

Spectrum spectrum(const PeriodicField& f);
PeriodicField from_spectrum(const PeriodicGrid& grid, const Spectrum& c);

// Root-mean-square of f computed from its spectrum (Parseval).
double spectral_norm(const Spectrum& c, int samples);

// Fourier collocation derivative of order 1 or 2. The Nyquist coefficient of
// the first derivative is zeroed.
PeriodicField differentiate(const PeriodicField& f, int order);

// Periodic trapezoid rule: dtheta * sum_j f_j.
double integrate_periodic(const PeriodicField& f);

inline constexpr double kDefaultResonanceTol = 1e-8;

// Solves w + w_thth = f. The frequency-one modes (k = +-m) lie in the kernel;
// they are dropped when their content is at most resonance_tol * |f| and
// ResonanceError is thrown otherwise.
PeriodicField invert_helmholtz(const PeriodicField& f,
                               double resonance_tol = kDefaultResonanceTol);

// Magnitude of the frequency-one content relative to the spectral norm.
double resonant_fraction(const PeriodicField& f);

// Trigonometric interpolant of f evaluated at an arbitrary angle.
double evaluate_at(const PeriodicField& f, double theta);

// Maximum of the trigonometric interpolant, refined by Newton iteration near
// the largest sample. Never below the largest sample.
double interpolated_max(const PeriodicField& f);

}  // namespace curveflow
