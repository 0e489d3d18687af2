#pragma once

// The two transverse branches of the Klein-Gordon dispersion relation for
// axially symmetric modes psi = phi(rho) exp(i kz z - i omega t):
//
//   subluminal   (omega/c)^2 - kz^2 - mu^2 =  Q^2 > 0   -> phi = J0(Q rho)
//   superluminal (omega/c)^2 - kz^2 - mu^2 = -q^2 < 0   -> phi = K0(q rho)
//
// omega >= 0 by convention; counter-propagation is negative kz.

#include <optional>
#include <variant>

#include "kgsol/domain.hpp"

namespace kgsol {

struct Subluminal {
  double Q = 1.0;  ///< transverse wavenumber, > 0
  double kz = 0.0;
};

struct Superluminal {
  double q = 1.0;  ///< transverse decay constant, > 0
  double kz = 0.0;
};

struct ModeSpec {
  std::variant<Subluminal, Superluminal> kind;
  Params params;

  static ModeSpec subluminal(double Q, double kz, Params params = {});
  static ModeSpec superluminal(double q, double kz, Params params = {});

  bool isSuperluminalBranch() const { return std::holds_alternative<Superluminal>(kind); }
  double kz() const;
  /// Transverse wavenumber Q or q, whichever branch this is.
  double transverse() const;
  /// Superluminal branch with q > mu: the regime where vGroup > c.
  bool hasSuperluminalGroupVelocity() const;

  /// Throws DomainError on Q <= 0, q <= 0, bad params, or imaginary omega.
  void validate() const;
};

/// Branch sign for the inverse relation kz(omega).
enum class Branch { Plus, Minus };

/// omega = c sqrt(kz^2 + Q^2 + mu^2) or c sqrt(kz^2 + mu^2 - q^2).
double omegaOf(const ModeSpec& mode);

/// kz = +-sqrt((omega/c)^2 + q^2 - mu^2) on the superluminal branch.
double kzOfOmega(double omega, double q, const Params& params, Branch branch);

/// Group velocity c^2 kz / omega. Empty when omega = 0, where it diverges
/// (superluminal branch at kz^2 = q^2 - mu^2).
struct GroupVelocity {
  std::optional<double> value;
  bool diverges() const { return !value.has_value(); }
};

GroupVelocity groupVelocity(const ModeSpec& mode);

/// omega / |kz|; kz = 0 throws DomainError.
double phaseVelocity(const ModeSpec& mode);

struct DispersionPoint {
  double omega = 0.0;
  double kz = 0.0;
  std::optional<double> vPhase;  ///< empty at kz = 0
  std::optional<double> vGroup;  ///< empty where it diverges
};

DispersionPoint dispersionPoint(const ModeSpec& mode);

}  // namespace kgsol
