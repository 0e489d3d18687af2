#pragma once

// Monochromatic axially symmetric Klein-Gordon modes and a finite-difference
// check that they solve the full equation
//   (1/c^2) d_t^2 psi - d_z^2 psi - (d_rho^2 + (1/rho) d_rho) psi + mu^2 psi = 0.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "kgsol/dispersion.hpp"
#include "kgsol/domain.hpp"

namespace kgsol {

using ComplexField = std::complex<double>;

/// A mode value split into its real transverse profile phi(rho) and the
/// phase kz z - omega t.
struct ModeSample {
  double profile = 0.0;
  double phase = 0.0;

  ComplexField field() const { return std::polar(1.0, phase) * profile; }
  /// |phi(rho)|; depends on rho only, bit-for-bit.
  double modulus() const { return profile < 0.0 ? -profile : profile; }
};

/// J0(Q rho) exp(i kz z - i omega t). Requires a Subluminal mode.
ModeSample besselBeamSample(const SpacetimePoint& p, const ModeSpec& mode);
ComplexField besselBeam(const SpacetimePoint& p, const ModeSpec& mode);

/// K0(q rho) exp(i kz z - i omega t). Requires a Superluminal mode with real
/// omega, and rho > 0 (K0 diverges logarithmically on the axis).
ModeSample superluminalModeSample(const SpacetimePoint& p, const ModeSpec& mode);
ComplexField superluminalMode(const SpacetimePoint& p, const ModeSpec& mode);

/// Dispatches on the mode's branch.
ComplexField modeField(const SpacetimePoint& p, const ModeSpec& mode);

using PointField = std::function<ComplexField(const SpacetimePoint&)>;

/// Klein-Gordon operator applied to `field` at p with second-order central
/// differences of step h in rho and z and h/c in t. Requires rho > h > 0.
ComplexField kgResidual(const PointField& field, const SpacetimePoint& p, double h,
                        const Params& params);

/// Evaluates field at every point, fanning out over `threads` workers
/// (0 = hardware concurrency). Output order matches input order.
std::vector<ComplexField> evaluateGrid(const PointField& field,
                                       std::span<const SpacetimePoint> points,
                                       unsigned threads = 0);

}  // namespace kgsol
