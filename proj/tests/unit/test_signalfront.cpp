#include <cmath>

#include "doctest.h"
#include "kgsol/domain.hpp"
#include "kgsol/signalfront.hpp"

using namespace kgsol;

namespace {

// Small grid for quick checks. The Nyquist phase check allows z up to T/8;
// gamma = 1 keeps the periodization error at exp(-64).
constexpr double kSmallWindow = 128.0;

SpectrumGrid small_grid() {
  SpectrumGrid g;
  g.size = std::size_t{1} << 17;
  g.window = kSmallWindow;
  return g;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("source transform closed form") {
  // Conjugate of the e^{-i omega t} convention value.
  const auto f = sourceTransform(3.0, 20.0, 0.5);
  const std::complex<double> a(0.5, -3.0);
  CHECK(std::abs(f - 20.0 / (a * a + 400.0)) <= 1e-16);
  CHECK(std::abs(sourceTransform(0.0, 20.0, 0.5) - 20.0 / (0.25 + 400.0)) <= 1e-16);
}

TEST_CASE("spectrum validation") {
  SpectrumGrid g = small_grid();
  g.size = 1000;
  CHECK_THROWS_AS((sourceSpectrum(20, 1, g)), DomainError);
  g = small_grid();
  g.horizon = 70.0;
  CHECK_THROWS_AS((sourceSpectrum(20, 1, g)), DomainError);
  g = small_grid();
  CHECK_THROWS_AS((sourceSpectrum(20, 0.0, g)), DomainError);
  g.taper = true;
  CHECK_NOTHROW((sourceSpectrum(20, 0.0, g)));
  CHECK_THROWS_AS((sourceSpectrum(0.0, 1.0, small_grid())), DomainError);
}

TEST_CASE("round trip reproduces the source") {
  const auto sp = sourceSpectrum(20, 1.0, small_grid());
  const auto law = PropagationLaw::superluminalBranch(2.0);
  const auto s = propagateSignal(sp, 0.0, law);
  const double peak = max_abs(s.field.values);
  double inside = 0, before = 0;
  for (std::size_t i = 0; i < s.field.values.size(); ++i) {
    const double t = s.field.time(i);
    if (t < 0) {
      before = std::max(before, std::abs(s.field.values[i]));
    } else {
      inside = std::max(inside, std::abs(s.field.values[i] - sourceSignal(t, sp.window, kSmallWindow)));
    }
  }
  CHECK(inside <= 1e-6 * peak);
  CHECK(before <= 1e-6 * peak);
}

TEST_CASE("z = 0 ignores the propagation law bit for bit") {
  const auto sp = sourceSpectrum(20, 1.0, small_grid());
  const auto a = propagateSignal(sp, 0.0, PropagationLaw::superluminalBranch(2.0));
  const auto b = propagateSignal(sp, 0.0, PropagationLaw::subluminalBranch(1.0));
  CHECK(a.field.values == b.field.values);
}

TEST_CASE("tapered undamped source") {
  SpectrumGrid g = small_grid();
  g.taper = true;
  const auto sp = sourceSpectrum(20, 0.0, g);
  const auto s = propagateSignal(sp, 0.0, PropagationLaw::superluminalBranch(1.0));
  double worst = 0;
  for (std::size_t i = 0; i < s.field.values.size(); ++i) {
    worst = std::max(worst, std::abs(s.field.values[i] -
                                     sourceSignal(s.field.time(i), sp.window, g.window)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("doubling the carrier doubles the spectral peak") {
  auto peak_omega = [](double w0) {
    const auto sp = sourceSpectrum(w0, 1.0, small_grid());
    std::size_t best = 0;
    for (std::size_t k = 0; k < sp.amplitudes.size() / 2; ++k) {
      if (std::abs(sp.amplitudes[k]) > std::abs(sp.amplitudes[best])) best = k;
    }
    return sp.omega(best);
  };
  const double a = peak_omega(20.0), b = peak_omega(40.0);
  CHECK(std::abs(b - 2 * a) <= 2 * small_grid().dOmega());
}

TEST_CASE("q = mu is a pure delay") {
  const auto sp = sourceSpectrum(20, 1.0, small_grid());
  const auto law = PropagationLaw::superluminalBranch(1.0);
  const double z = 10.0;
  const auto s = propagateSignal(sp, z, law);
  const double peak = max_abs(s.field.values);
  double worst = 0;
  for (std::size_t i = 0; i < s.field.values.size(); ++i) {
    const double t = s.field.time(i);
    worst = std::max(worst, std::abs(s.field.values[i] - sourceSignal(t - z, sp.window, kSmallWindow)));
  }
  CHECK(worst <= 1e-8 * peak);
  const auto front = detectFront(s.field, 1e-3);
  REQUIRE(front);
  CHECK(std::abs(*front - z) <= s.field.dt);
}

TEST_CASE("front detection edge cases") {
  TimeSeries ts;
  ts.dt = 0.5;
  ts.values = {0, 0, 0, 0, 0.5, 1.0, 0.2, 0};  // t = -2 ... 1.5
  auto f = detectFront(ts, 0.25);
  REQUIRE(f);
  CHECK(*f == doctest::Approx(-0.25));
  TimeSeries zero;
  zero.dt = 1;
  zero.values = std::vector<double>(8, 0.0);
  CHECK_FALSE(detectFront(zero, 0.1).has_value());
  CHECK_THROWS_AS((detectFront(ts, 1.5)), DomainError);
  CHECK(detectPeak(ts) == doctest::Approx(0.5 + 0.5 * 0.3 / (2 * (0.5 - 2.0 + 0.2))).epsilon(1e-12));
}

TEST_CASE("lowering the threshold never delays the front") {
  const auto sp = sourceSpectrum(20, 1.0, small_grid());
  const auto s = propagateSignal(sp, 8.0, PropagationLaw::subluminalBranch(1.0));
  double prev = -1e300;
  for (double th : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 0.5}) {
    const auto f = detectFront(s.field, th);
    REQUIRE(f);
    CHECK(*f >= prev);
    prev = *f;
  }
}

TEST_CASE("aliasing detector") {
  SpectrumGrid g;
  g.size = std::size_t{1} << 14;
  g.window = 16.0;
  const auto sp = sourceSpectrum(20, 3.0, g);
  CHECK_THROWS_AS((propagateSignal(sp, 7.0, PropagationLaw::superluminalBranch(2.0))), DomainError);
}

TEST_CASE("spectral energy is conserved under propagation") {
  const auto sp = sourceSpectrum(20, 1.0, small_grid());
  const auto law = PropagationLaw::superluminalBranch(2.0);
  const double e0 = spectralEnergy(sp, 0.0, law);
  for (double z : {1.0, 5.0, 10.0}) {
    CHECK(std::abs(spectralEnergy(sp, z, law) - e0) <= 1e-12 * e0);
  }
}

TEST_CASE("propagation laws") {
  const auto sup = PropagationLaw::superluminalBranch(2.0);
  CHECK(sup.effectiveMassSquared() == -3.0);
  CHECK(sup.kz(1.0) == std::complex<double>(2.0, 0.0));
  CHECK(sup.kz(-1.0) == std::complex<double>(-2.0, 0.0));
  CHECK(sup.groupVelocity(20.0) == doctest::Approx(std::sqrt(403.0) / 20.0).epsilon(1e-15));
  const auto sub = PropagationLaw::subluminalBranch(1.0);
  CHECK(sub.kz(1.0) == std::complex<double>(0.0, 1.0));
  CHECK(sub.groupVelocity(20.0) < 1.0);
  CHECK_THROWS_AS(PropagationLaw::superluminalBranch(0.0).validate(), DomainError);
}

TEST_CASE("velocity fit") {
  CHECK(fitVelocity({5, 10, 15, 20}, {1, 2, 3, 4}) == doctest::Approx(5.0));
  CHECK_THROWS_AS((fitVelocity({1}, {1})), DomainError);
}

TEST_CASE("dispersionless and subluminal experiments") {
  FrontExperimentConfig cfg;
  cfg.law = PropagationLaw::superluminalBranch(1.0);
  const auto lum = frontVelocityExperiment(cfg);
  CHECK(lum.causal);
  CHECK(std::abs(lum.frontVelocity - 1.0) <= lum.dt);
  CHECK(std::abs(lum.peakVelocity - 1.0) <= lum.dt);
  for (const auto& r : lum.reports) CHECK(std::abs(r.frontArrival - r.z) <= lum.dt);

  cfg.law = PropagationLaw::subluminalBranch(1.0);
  const auto sub = frontVelocityExperiment(cfg);
  CHECK(sub.causal);
  CHECK(sub.frontWithinBound);
  CHECK(sub.peakVelocity < 1.0);
  for (const auto& r : sub.reports) CHECK(r.peakArrival >= r.frontArrival);

  // Grid refinement: doubling N (same T) moves the front velocity < 0.2%.
  cfg.grid.size = std::size_t{1} << 19;
  const auto coarse = frontVelocityExperiment(cfg);
  CHECK(std::abs(coarse.frontVelocity - sub.frontVelocity) <= 2e-3 * sub.frontVelocity);
}

TEST_CASE("superluminal peak leads the luminal copy") {
  // At z = 10 the envelope peak of the q = 2 signal arrives ahead of the
  // q = mu (pure delay) signal by about z (1/c - 1/v_g).
  const SpectrumGrid g;
  const auto sp = sourceSpectrum(20, 0.5, g);
  const auto fast = propagateSignal(sp, 10.0, PropagationLaw::superluminalBranch(2.0), true);
  const auto lum = propagateSignal(sp, 10.0, PropagationLaw::superluminalBranch(1.0), true);
  const double lead = detectPeak(lum.envelope) - detectPeak(fast.envelope);
  const double vg = PropagationLaw::superluminalBranch(2.0).groupVelocity(20.0);
  const double predicted = 10.0 * (1.0 - 1.0 / vg);
  CHECK(lead > 0.0);
  CHECK(std::abs(lead - predicted) <= 0.05 * predicted);
}

TEST_CASE("experiment validation") {
  FrontExperimentConfig cfg;
  cfg.zList = {5, 10, 15};
  CHECK_THROWS_AS(frontVelocityExperiment(cfg), DomainError);
  cfg.zList = {5, 10, 10, 20};
  CHECK_THROWS_AS(frontVelocityExperiment(cfg), DomainError);
}
