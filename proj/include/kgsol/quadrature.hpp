#pragma once

// One-dimensional adaptive quadrature for the semi-infinite integrals in this
// library:
//   * integrateDecaying            eventually exponentially decaying integrands
//   * integrateOscillatoryBessel   envelope * {J0, sin, cos}(freq x), panels
//                                  between kernel zeros + Euler acceleration
//   * integrateRegulated           conditionally convergent integrals as the
//                                  eps -> 0 limit of damped versions
//
// All routines are deterministic: panel order and summation order depend only
// on the inputs.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace kgsol {

struct QuadratureSpec {
  double relTol = 1e-10;
  double absTol = 1e-14;
  std::size_t maxPanels = 1'000'000;
  /// The semi-infinite tail is dropped once the decay probe bounds it below
  /// tailCutoff * absTol.
  double tailCutoff = 0.1;
  /// Strictly decreasing, positive regulator values for integrateRegulated.
  std::vector<double> regulatorSchedule = {0.2, 0.1, 0.05, 0.025, 0.0125};
  /// Relative tolerance the eps -> 0 extrapolation must meet to count as
  /// converged. Extrapolation error sits far above the per-eps quadrature
  /// error, so it gets its own target.
  double extrapolationRelTol = 1e-5;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double errorEstimate = 0.0;
  std::size_t panelsUsed = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod 7/15 on a finite interval.
QuadratureResult integrateInterval(const Integrand& f, double a, double b,
                                   const QuadratureSpec& spec);

/// Integral of f over [a, inf) for f with eventual exponential decay.
/// Marches over panels of doubling width until the decay probe bounds the
/// remainder below spec.tailCutoff * spec.absTol.
QuadratureResult integrateDecaying(const Integrand& f, double a, const QuadratureSpec& spec);

/// Integral over [a, inf) as a series of panels [a, x0], [x0, x1], ... where
/// node(first), node(first + 1), ... are increasing sign changes of f. The
/// partial sums are accelerated by repeated averaging (Euler transform).
/// Throws DomainError if the panel terms keep growing.
QuadratureResult integrateBetweenNodes(const Integrand& f, double a,
                                       const std::function<double(std::size_t)>& node,
                                       std::size_t first, const QuadratureSpec& spec);

enum class OscillatoryKernel { BesselJ0, Sine, Cosine };

/// Integral of envelope(x) * kernel(freq * x) over [a, inf). freq = 0
/// degenerates to integrateDecaying of envelope * kernel(0).
QuadratureResult integrateOscillatoryBessel(const Integrand& envelope, OscillatoryKernel kernel,
                                            double kernelFreq, double a,
                                            const QuadratureSpec& spec);

/// s-th positive zero of J0 (s >= 1): McMahon's expansion polished by Newton.
double besselJ0Zero(std::size_t s);

enum class Regulator {
  Exponential,  ///< exp(-eps x); I(eps) = I0 + c1 eps + c2 eps^2 + ...
  Gaussian,     ///< exp(-(eps x)^2); I(eps) = I0 + c1 eps^2 + c2 eps^4 + ...
};

double regulatorFactor(Regulator reg, double eps, double x);

/// f(x, eps): the damped integrand for one regulator value.
using RegulatedIntegrand = std::function<double(double, double)>;

struct RegulatedResult {
  QuadratureResult result;                ///< extrapolated eps -> 0 value
  std::vector<double> epsilons;           ///< schedule used
  std::vector<QuadratureResult> perEpsilon;
  std::vector<double> extrapolationDiagonal;  ///< order-0, 1, ... estimates of I0
};

struct KernelSpec {
  OscillatoryKernel kind = OscillatoryKernel::BesselJ0;
  double freq = 1.0;
};

/// Computes I(eps) for each eps in spec.regulatorSchedule and extrapolates
/// to eps = 0 with polynomial (Neville) extrapolation in eps or eps^2
/// depending on the regulator. With a kernel, family is the damped envelope
/// and each I(eps) goes through integrateOscillatoryBessel; otherwise
/// integrateDecaying. A growing extrapolation increment, or a one-entry
/// schedule, yields converged = false.
RegulatedResult integrateRegulated(const RegulatedIntegrand& family, double a,
                                   const QuadratureSpec& spec,
                                   Regulator reg = Regulator::Exponential,
                                   std::optional<KernelSpec> kernel = std::nullopt);

/// family(x, eps) = base(x) * regulatorFactor(reg, eps, x).
RegulatedIntegrand regulate(Integrand base, Regulator reg);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace kgsol
