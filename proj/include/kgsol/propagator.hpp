#pragma once

// Green-function identities for the Klein-Gordon equation built from the
// axially symmetric modes.
//
// Outside the light cone, with lambdaTilde^2 = rho^2 + tauTilde^2:
//   (1/2pi) int_mu^inf q K0(q rho) J0(tauTilde sqrt(q^2 - mu^2)) dq
//       = mu K1(mu lambdaTilde) / (2 pi lambdaTilde)
//
// Inside the light cone the Q integral
//   (1/2pi) int_0^inf Q J0(Q rho) J0(tau sqrt(Q^2 + mu^2)) dQ
// is only conditionally convergent and is evaluated as a regulated limit.
//
// The inner k_z and omega integrals that collapse to J0 are computed
// directly; their proportionality constants are measured, not assumed.

#include <vector>

#include "kgsol/domain.hpp"
#include "kgsol/quadrature.hpp"

namespace kgsol {

/// Smallest mu * lambdaTilde accepted by the spacelike quadrature.
inline constexpr double kMinSpacelikeInterval = 0.05;
/// Smallest tau / rho accepted by the timelike propagator.
inline constexpr double kMinTimelikeRatio = 1.1;
/// tauTilde * mu above which the q integral switches to u = sqrt(q^2 - mu^2).
inline constexpr double kSubstitutionThreshold = 5.0;

/// mu K1(mu lambdaTilde) / (2 pi lambdaTilde). Requires lambdaTilde > 0, mu > 0.
double spacelikeClosedForm(double lambdaTilde, const Params& params);

/// The q integral above. Requires rho > 0, tauTilde >= 0 and
/// mu * sqrt(rho^2 + tauTilde^2) >= kMinSpacelikeInterval.
QuadratureResult spacelikeQuadrature(double rho, double tauTilde, const Params& params,
                                     const QuadratureSpec& spec);

struct PropagatorCheckReport {
  SpacetimePoint point;  ///< (rho, z = tauTilde, t = 0)
  double lhs = 0.0;      ///< quadrature
  double rhs = 0.0;      ///< closed form
  double relError = 0.0;
  QuadratureResult quadrature;
};

/// Runs both sides of the spacelike identity at one (rho, tauTilde).
PropagatorCheckReport checkSpacelikeIdentity(double rho, double tauTilde, const Params& params,
                                             const QuadratureSpec& spec);

/// Grid sweep, parallel over points; output order follows (rho major, tauTilde minor).
std::vector<PropagatorCheckReport> checkSpacelikeGrid(const std::vector<double>& rhos,
                                                      const std::vector<double>& tauTildes,
                                                      const Params& params,
                                                      const QuadratureSpec& spec,
                                                      unsigned threads = 0);

struct KernelValue {
  double value = 0.0;
  QuadratureResult quadrature;
  /// The event lies outside the kernel's own region; value is diagnostic only.
  bool outsideDomain = false;
};

/// Re int dk sin(omega |t|)/omega exp(i k z), omega = c sqrt(k^2 + M^2).
/// Proportional to J0(M sqrt(c^2 t^2 - z^2)) for c|t| > |z|.
KernelValue innerKernelTimelike(double M, double z, double t, const Params& params,
                                const QuadratureSpec& spec);

/// Re int domega sin(k(omega)|z|)/k(omega) exp(-i omega t),
/// k(omega) = sqrt((omega/c)^2 + kappa^2). Proportional to
/// J0(kappa sqrt(z^2 - c^2 t^2)) for |z| > c|t|.
KernelValue innerKernelSpacelike(double kappa, double z, double t, const Params& params,
                                 const QuadratureSpec& spec);

/// int_0^inf sin(A sqrt(k^2 + M^2) + B k) / sqrt(k^2 + M^2) dk for A > 0,
/// A != |B|, M >= 0. Both inner kernels are sums of two of these.
QuadratureResult hyperbolicPhaseIntegral(double A, double B, double M,
                                         const QuadratureSpec& spec);

/// (1/2pi) int_0^inf Q J0(Q rho) J0(tau sqrt(Q^2 + mu^2)) dQ as a regulated
/// limit. Requires tau > 0, rho >= 0 and tau >= kMinTimelikeRatio * rho.
RegulatedResult timelikePropagator(double rho, double tau, const Params& params,
                                   const QuadratureSpec& spec,
                                   Regulator regulator = Regulator::Exponential);

}  // namespace kgsol
