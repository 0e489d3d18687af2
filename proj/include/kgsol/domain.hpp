#pragma once

// Physical parameters, spacetime events and Lorentz-interval classification.
//
// Units are natural: hbar = 1 and the mass only enters through the Compton
// wavenumber mu = mc/hbar. The light speed is kept as an explicit field so
// tables can be rescaled without touching the formulas; internally c = 1.

#include <optional>
#include <stdexcept>
#include <string>

namespace kgsol {

/// Raised when an argument lies outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical procedure fails to produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Params {
  double mu = 1.0;  ///< Compton wavenumber mc/hbar, >= 0.
  double c = 1.0;   ///< light speed, > 0.

  /// Throws DomainError unless mu >= 0 and c > 0 (both finite).
  void validate() const;
};

struct SpacetimePoint {
  double rho = 0.0;  ///< cylindrical radius, >= 0
  double z = 0.0;
  double t = 0.0;
};

enum class IntervalKind { Timelike, Spacelike, Lightlike };

/// Invariant intervals of an event relative to the origin. Each optional is
/// populated only in the region where its radicand is non-negative.
struct IntervalClass {
  IntervalKind kind = IntervalKind::Lightlike;
  std::optional<double> lambda;       ///< sqrt(c^2 t^2 - r^2), timelike only
  std::optional<double> lambdaTilde;  ///< sqrt(r^2 - c^2 t^2), spacelike only
  std::optional<double> tau;          ///< sqrt(c^2 t^2 - z^2) when c^2 t^2 >= z^2
  std::optional<double> tauTilde;     ///< sqrt(z^2 - c^2 t^2) when z^2 >= c^2 t^2
};

/// Relative width of the band around the light cone reported as Lightlike.
inline constexpr double kLightlikeTolerance = 1e-12;

IntervalClass classify(const SpacetimePoint& p, const Params& params);

std::string to_string(IntervalKind kind);

}  // namespace kgsol
