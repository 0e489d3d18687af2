#include "kgsol/signalfront.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "kgsol/parallel.hpp"

namespace kgsol {
namespace {

constexpr double kPi = std::numbers::pi;
/// The source must decay to this fraction of its onset over half a window.
constexpr double kPeriodizationFloor = 1e-8;
constexpr double kMaxNyquistPhaseStep = kPi / 4.0;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place DFT of length data.size(); sign -1 is exp(-2 pi i k n / N).
// FFTW_UNALIGNED pins the codelet choice so repeated runs are bit-identical.
void fft(std::vector<std::complex<double>>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf,
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (!plan) throw NumericalError("fft: FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

double taper_factor(double t, double period) {
  const double start = 0.25 * period;
  const double stop = 0.5 * period;
  if (t <= start) return 1.0;
  if (t >= stop) return 0.0;
  const double x = (t - start) / (stop - start);
  return 0.5 * (1.0 + std::cos(kPi * x));
}

// FFT-ordered buffer to chronological real series.
TimeSeries to_series(const std::vector<std::complex<double>>& buf, double dt, double scale,
                     bool modulus) {
  const std::size_t n = buf.size();
  TimeSeries out;
  out.dt = dt;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (k + n / 2) % n;
    out.values[i] = modulus ? std::abs(buf[k]) * scale : buf[k].real() * scale;
  }
  return out;
}

}  // namespace

double SpectrumGrid::dOmega() const { return 2.0 * kPi / window; }

double Spectrum::omega(std::size_t k) const {
  const auto n = static_cast<long long>(grid.size);
  auto kk = static_cast<long long>(k);
  if (kk >= n / 2) kk -= n;
  return static_cast<double>(kk) * grid.dOmega();
}

std::complex<double> sourceTransform(double omega, double omega0, double decay) {
  const std::complex<double> a(decay, -omega);
  return omega0 / (a * a + omega0 * omega0);
}

double sourceSignal(double t, const SourceWindow& window, double period) {
  if (t < 0.0) return 0.0;
  double s = std::sin(window.omega0 * t) * std::exp(-window.decay * t);
  if (window.taper) s *= taper_factor(t, period);
  return s;
}

Spectrum sourceSpectrum(double omega0, double decay, const SpectrumGrid& grid) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw DomainError("sourceSpectrum: omega0 must be > 0");
  }
  if (!(decay >= 0.0) || !std::isfinite(decay)) {
    throw DomainError("sourceSpectrum: decay must be >= 0");
  }
  if (!is_power_of_two(grid.size)) throw DomainError("sourceSpectrum: size must be a power of two");
  if (!(grid.window > 0.0)) throw DomainError("sourceSpectrum: window must be > 0");
  if (!(grid.window > 2.0 * grid.horizon)) {
    throw DomainError("sourceSpectrum: window T must exceed twice the latest arrival time");
  }
  if (!grid.taper && std::exp(-0.5 * decay * grid.window) > kPeriodizationFloor) {
    throw DomainError(
        "sourceSpectrum: source does not decay within half the window; raise decay or "
        "window, or enable taper");
  }

  Spectrum sp;
  sp.grid = grid;
  sp.window = {omega0, decay, grid.taper};
  sp.carrier = omega0;
  sp.amplitudes.resize(grid.size);
  const double dt = grid.dt();

  if (!grid.taper) {
    // sum_{n>=0} sin(n theta) u^n = u sin(theta) / (1 - 2 u cos(theta) + u^2)
    const double theta = omega0 * dt;
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    for (std::size_t k = 0; k < grid.size; ++k) {
      const std::complex<double> u =
          std::exp(std::complex<double>(-decay * dt, sp.omega(k) * dt));
      sp.amplitudes[k] = dt * u * st / (1.0 - 2.0 * ct * u + u * u);
    }
    return sp;
  }

  const std::size_t n = grid.size;
  for (std::size_t i = 0; i < n; ++i) {
    // FFT order in time: index i < n/2 is t = i dt, the rest negative (zero).
    const double t = i < n / 2 ? static_cast<double>(i) * dt : -1.0;
    sp.amplitudes[i] = sourceSignal(t, sp.window, grid.window);
  }
  fft(sp.amplitudes, +1);
  for (auto& a : sp.amplitudes) a *= dt;
  return sp;
}

PropagationLaw PropagationLaw::superluminalBranch(double q, Params params) {
  return {true, q, params};
}

PropagationLaw PropagationLaw::subluminalBranch(double Q, Params params) {
  return {false, Q, params};
}

double PropagationLaw::effectiveMassSquared() const {
  const double mu = params.mu;
  if (superluminal) return (mu - transverse) * (mu + transverse);
  return transverse * transverse + mu * mu;
}

void PropagationLaw::validate() const {
  params.validate();
  if (!(transverse > 0.0) || !std::isfinite(transverse)) {
    throw DomainError("PropagationLaw: transverse wavenumber must be > 0");
  }
}

std::complex<double> PropagationLaw::kz(double omega) const {
  const double w = omega / params.c;
  const double m2 = effectiveMassSquared();
  const double r = w * w - m2;
  if (r >= 0.0) {
    const double k = std::sqrt(r);
    return omega > 0.0 ? k : (omega < 0.0 ? -k : 0.0);
  }
  return {0.0, std::sqrt(-r)};
}

double PropagationLaw::groupVelocity(double omega) const {
  const auto k = kz(omega);
  if (k.imag() != 0.0 || omega == 0.0) return 0.0;
  return params.c * params.c * k.real() / omega;
}

double TimeSeries::time(std::size_t i) const {
  return (static_cast<double>(i) - static_cast<double>(values.size() / 2)) * dt;
}

PropagatedSignal propagateSignal(const Spectrum& spectrum, double z, const PropagationLaw& law,
                                 bool withEnvelope) {
  law.validate();
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("propagateSignal: z must be >= 0");
  const std::size_t n = spectrum.grid.size;
  const double dw = spectrum.grid.dOmega();
  const double w_nyq = 0.5 * static_cast<double>(n) * dw;
  const double step = std::abs(law.kz(w_nyq) - law.kz(w_nyq - dw)) * z;
  if (step > kMaxNyquistPhaseStep) {
    throw DomainError("propagateSignal: exp(i kz z) advances " + std::to_string(step) +
                      " rad per grid step at the Nyquist edge (> pi/4); use a longer window");
  }

  std::vector<std::complex<double>> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, 1.0) * law.kz(spectrum.omega(k)) * z);
    g[k] = spectrum.amplitudes[k] * phase;
  }

  PropagatedSignal out;
  out.z = z;
  const double scale = 1.0 / spectrum.grid.window;  // dOmega / 2pi
  std::vector<std::complex<double>> analytic;
  if (withEnvelope) {
    analytic.assign(n, {0.0, 0.0});
    analytic[0] = g[0];
    for (std::size_t k = 1; k < n / 2; ++k) analytic[k] = 2.0 * g[k];
  }
  fft(g, -1);
  out.field = to_series(g, spectrum.grid.dt(), scale, false);
  if (withEnvelope) {
    fft(analytic, -1);
    out.envelope = to_series(analytic, spectrum.grid.dt(), scale, true);
  }
  return out;
}

double spectralEnergy(const Spectrum& spectrum, double z, const PropagationLaw& law) {
  double sum = 0.0;
  for (std::size_t k = 0; k < spectrum.amplitudes.size(); ++k) {
    const auto phase = std::exp(std::complex<double>(0.0, 1.0) * law.kz(spectrum.omega(k)) * z);
    sum += std::norm(spectrum.amplitudes[k] * phase);
  }
  return sum;
}

std::optional<double> detectFront(const TimeSeries& series, double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0)) {
    throw DomainError("detectFront: threshold must lie in (0, 1)");
  }
  double peak = 0.0;
  for (double v : series.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return std::nullopt;
  const double level = threshold * peak;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const double a = std::abs(series.values[i]);
    if (a > level) {
      if (i == 0) return series.time(0);
      const double b = std::abs(series.values[i - 1]);
      const double frac = (level - b) / (a - b);
      return series.time(i - 1) + frac * series.dt;
    }
  }
  return std::nullopt;
}

double detectPeak(const TimeSeries& series) {
  if (series.values.empty()) throw DomainError("detectPeak: empty series");
  std::size_t best = 0;
  for (std::size_t i = 1; i < series.values.size(); ++i) {
    if (std::abs(series.values[i]) > std::abs(series.values[best])) best = i;
  }
  double t = series.time(best);
  if (best > 0 && best + 1 < series.values.size()) {
    const double ym = std::abs(series.values[best - 1]);
    const double y0 = std::abs(series.values[best]);
    const double yp = std::abs(series.values[best + 1]);
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) t += 0.5 * (ym - yp) / denom * series.dt;
  }
  return t;
}

double fitVelocity(const std::vector<double>& z, const std::vector<double>& t) {
  if (z.size() != t.size() || z.size() < 2) {
    throw DomainError("fitVelocity: need at least two (z, t) pairs");
  }
  double tm = 0.0, zm = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    tm += t[i];
    zm += z[i];
  }
  tm /= static_cast<double>(t.size());
  zm /= static_cast<double>(z.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    sxy += (t[i] - tm) * (z[i] - zm);
    sxx += (t[i] - tm) * (t[i] - tm);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::infinity();
  return sxy / sxx;
}

void FrontExperimentConfig::validate() const {
  law.validate();
  if (zList.size() < 4) throw DomainError("frontVelocityExperiment: need at least 4 z values");
  for (std::size_t i = 0; i < zList.size(); ++i) {
    if (!(zList[i] >= 0.0)) throw DomainError("frontVelocityExperiment: z must be >= 0");
    if (i > 0 && !(zList[i] > zList[i - 1])) {
      throw DomainError("frontVelocityExperiment: zList must be strictly increasing");
    }
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw DomainError("frontVelocityExperiment: threshold must lie in (0, 1)");
  }
  for (double th : thresholdSweep) {
    if (!(th > 0.0 && th < 1.0)) {
      throw DomainError("frontVelocityExperiment: sweep thresholds must lie in (0, 1)");
    }
  }
}

FrontExperimentResult frontVelocityExperiment(const FrontExperimentConfig& config) {
  config.validate();
  const double c = config.law.params.c;
  SpectrumGrid grid = config.grid;
  if (grid.horizon == 0.0) grid.horizon = config.zList.back() / c;
  const Spectrum spectrum = sourceSpectrum(config.omega0, config.gamma, grid);
  const std::size_t nz = config.zList.size();

  struct PerZ {
    FrontReport report;
    std::vector<double> sweepFronts;
    PropagatedSignal signal;
  };
  std::vector<PerZ> per(nz);
  std::vector<std::string> failures(nz);

  parallel_for(
      nz,
      [&](std::size_t i) {
        const double z = config.zList[i];
        PropagatedSignal sig = propagateSignal(spectrum, z, config.law, true);
        PerZ& p = per[i];
        p.report.z = z;
        p.report.threshold = config.threshold;
        const auto front = detectFront(sig.field, config.threshold);
        if (!front) {
          failures[i] = "no arrival above threshold at z = " + std::to_string(z);
          return;
        }
        p.report.frontArrival = *front;
        p.report.peakArrival = detectPeak(sig.envelope);
        double peak = 0.0, pre = 0.0;
        const double cutoff = z / c - sig.field.dt;
        for (std::size_t k = 0; k < sig.field.values.size(); ++k) {
          const double a = std::abs(sig.field.values[k]);
          peak = std::max(peak, a);
          if (sig.field.time(k) < cutoff) pre = std::max(pre, a);
        }
        p.report.precursorLevel = pre / peak;
        for (double th : config.thresholdSweep) {
          const auto f = detectFront(sig.field, th);
          p.sweepFronts.push_back(f ? *f : std::nan(""));
        }
        if (config.keepSeries) p.signal = std::move(sig);
      },
      config.threads);

  std::string diag;
  for (const auto& f : failures) {
    if (!f.empty()) diag += (diag.empty() ? "" : "; ") + f;
  }
  if (!diag.empty()) throw NumericalError("frontVelocityExperiment: " + diag);

  FrontExperimentResult res;
  res.dt = grid.dt();
  std::vector<double> fronts, peaks;
  for (const auto& p : per) {
    fronts.push_back(p.report.frontArrival);
    peaks.push_back(p.report.peakArrival);
  }
  res.frontVelocity = fitVelocity(config.zList, fronts);
  res.peakVelocity = fitVelocity(config.zList, peaks);
  res.causal = true;
  for (auto& p : per) {
    p.report.frontVelocity = res.frontVelocity;
    p.report.peakVelocity = res.peakVelocity;
    if (p.report.frontArrival < p.report.z / c - res.dt) res.causal = false;
    res.reports.push_back(p.report);
    if (config.keepSeries) res.series.push_back(std::move(p.signal));
  }
  for (std::size_t j = 0; j < config.thresholdSweep.size(); ++j) {
    ThresholdSweepEntry e;
    e.threshold = config.thresholdSweep[j];
    for (const auto& p : per) e.frontArrivals.push_back(p.sweepFronts[j]);
    e.frontVelocity = fitVelocity(config.zList, e.frontArrivals);
    res.sweep.push_back(std::move(e));
  }
  res.predictedGroupVelocity = config.law.groupVelocity(config.omega0);
  res.frontWithinBound = res.frontVelocity > 0.0 && res.frontVelocity <= c * (1.0 + config.frontSlack);
  res.peakSuperluminal = res.peakVelocity > c;
  return res;
}

}  // namespace kgsol
