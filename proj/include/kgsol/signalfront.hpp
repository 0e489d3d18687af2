#pragma once

// Spectral synthesis of a sharp-onset signal carried by a single transverse
// mode family, propagated along z with the exact dispersion relation, and
// front / peak arrival measurement.
//
// Conventions: F(omega) = int s(t) exp(+i omega t) dt and
//   psi(z, t) = (1/2pi) int F(omega) exp(i kz(omega) z - i omega t) domega,
// matching the modes' exp(i kz z - i omega t). kz(-omega) = -kz(omega)
// keeps psi real for a real source.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kgsol/domain.hpp"

namespace kgsol {

/// Sampling of the frequency axis. The time window is T = 2 pi / dOmega and
/// the time step T / size.
struct SpectrumGrid {
  std::size_t size = std::size_t{1} << 20;  ///< power of two
  double window = 256.0;                     ///< T
  double horizon = 0.0;                      ///< latest arrival time to be simulated
  bool taper = false;                        ///< required when the decay rate is 0

  double dt() const { return window / static_cast<double>(size); }
  double dOmega() const;
};

/// s(t) = theta(t) sin(omega0 t) exp(-decay t).
struct SourceWindow {
  double omega0 = 20.0;
  double decay = 0.5;
  bool taper = false;  ///< raised-cosine turn-off over [T/4, T/2)
};

struct Spectrum {
  SpectrumGrid grid;
  SourceWindow window;
  double carrier = 0.0;
  /// FFT order: index k < size/2 is omega = k dOmega, the rest are negative.
  std::vector<std::complex<double>> amplitudes;

  double omega(std::size_t k) const;
};

/// Continuum transform omega0 / ((decay - i omega)^2 + omega0^2).
std::complex<double> sourceTransform(double omega, double omega0, double decay);

/// The source in the time domain (tapered if window.taper).
double sourceSignal(double t, const SourceWindow& window, double period);

/// Samples the source spectrum. Without taper this is the closed-form
/// discrete-time transform of the sampled source, so the inverse transform
/// returns the samples up to exp(-decay T) periodization. Throws DomainError
/// when the grid violates the periodization bound.
Spectrum sourceSpectrum(double omega0, double decay, const SpectrumGrid& grid);

/// Transverse branch that fixes kz(omega).
struct PropagationLaw {
  bool superluminal = true;
  double transverse = 2.0;  ///< q (superluminal) or Q (subluminal)
  Params params;

  static PropagationLaw superluminalBranch(double q, Params params = {});
  static PropagationLaw subluminalBranch(double Q, Params params = {});

  /// (Q^2 + mu^2) or (mu^2 - q^2); negative on the superluminal branch.
  double effectiveMassSquared() const;
  /// sign(omega) sqrt((omega/c)^2 - m^2); below the cutoff of a positive m^2
  /// the evanescent root i sqrt(m^2 - (omega/c)^2).
  std::complex<double> kz(double omega) const;
  /// c^2 kz / omega at the given frequency (propagating part only).
  double groupVelocity(double omega) const;
  void validate() const;
};

/// Samples in chronological order: t_i = (i - size/2) dt.
struct TimeSeries {
  double dt = 0.0;
  std::vector<double> values;

  double time(std::size_t i) const;
};

struct PropagatedSignal {
  double z = 0.0;
  TimeSeries field;     ///< real psi(z, t)
  TimeSeries envelope;  ///< |analytic signal|, empty unless requested
};

/// psi(z, t) by inverse FFT. Throws DomainError when the phase of
/// exp(i kz z) advances by more than pi/4 between adjacent grid points at
/// the Nyquist edge (grid too coarse for this z).
PropagatedSignal propagateSignal(const Spectrum& spectrum, double z, const PropagationLaw& law,
                                 bool withEnvelope = false);

/// sum |F(omega) exp(i kz z)|^2 over the grid.
double spectralEnergy(const Spectrum& spectrum, double z, const PropagationLaw& law);

/// First time |psi| exceeds threshold * max|psi|, linearly interpolated
/// between samples. Empty when nothing exceeds it.
std::optional<double> detectFront(const TimeSeries& series, double threshold = 1e-3);

/// Time of max |series|, refined by a parabola through the top three samples.
double detectPeak(const TimeSeries& series);

struct FrontReport {
  double z = 0.0;
  double frontArrival = 0.0;
  double peakArrival = 0.0;
  double frontVelocity = 0.0;  ///< fitted over the whole z list
  double peakVelocity = 0.0;   ///< fitted over the whole z list
  double threshold = 0.0;
  /// max |psi| strictly before z/c - dt, relative to max |psi|.
  double precursorLevel = 0.0;
};

struct ThresholdSweepEntry {
  double threshold = 0.0;
  double frontVelocity = 0.0;
  std::vector<double> frontArrivals;
};

struct FrontExperimentConfig {
  PropagationLaw law = PropagationLaw::superluminalBranch(2.0);
  double omega0 = 20.0;
  double gamma = 0.5;
  std::vector<double> zList = {5.0, 10.0, 15.0, 20.0};
  SpectrumGrid grid;
  double threshold = 1e-3;
  std::vector<double> thresholdSweep = {1e-4, 1e-3, 1e-2, 1e-1};
  /// Allowed front-velocity excess over c.
  double frontSlack = 5e-3;
  unsigned threads = 0;
  bool keepSeries = false;

  void validate() const;
};

struct FrontExperimentResult {
  std::vector<FrontReport> reports;
  std::vector<ThresholdSweepEntry> sweep;
  double frontVelocity = 0.0;
  double peakVelocity = 0.0;
  double predictedGroupVelocity = 0.0;  ///< c^2 kz(omega0) / omega0
  double dt = 0.0;
  bool causal = false;               ///< every front >= z/c - dt
  bool frontWithinBound = false;     ///< frontVelocity <= c (1 + frontSlack)
  bool peakSuperluminal = false;     ///< peakVelocity > c
  std::vector<PropagatedSignal> series;  ///< only with keepSeries
};

/// Runs the source through every z (in parallel), detects fronts and peaks
/// and fits velocities by least squares of z against arrival time.
/// Throws NumericalError if a z sees no arrival.
FrontExperimentResult frontVelocityExperiment(const FrontExperimentConfig& config);

/// Slope v of the least-squares line z = a + v t.
double fitVelocity(const std::vector<double>& z, const std::vector<double>& t);

}  // namespace kgsol
