#include "kgsol/modes.hpp"

#include <cmath>

#include "kgsol/parallel.hpp"
#include "kgsol/specfun.hpp"

namespace kgsol {
namespace {

// Q rho rounds to x with an exact residual d = Q rho - x; the first-order
// correction f(x) + f'(x) d keeps the profile smooth in rho at the ulp level.
double j0_of_product(double a, double b) {
  const double x = a * b;
  const double d = std::fma(a, b, -x);
  return besselJ0(x) - besselJ1(x) * d;
}

double k0_of_product(double a, double b) {
  const double x = a * b;
  const double d = std::fma(a, b, -x);
  const auto k = besselK01(x);
  return k.k0 - k.k1 * d;
}

double phase_of(double kz, double z, double omega, double t) {
  return static_cast<double>(static_cast<long double>(kz) * z -
                             static_cast<long double>(omega) * t);
}

}  // namespace

ModeSample besselBeamSample(const SpacetimePoint& p, const ModeSpec& mode) {
  const auto* sub = std::get_if<Subluminal>(&mode.kind);
  if (!sub) throw DomainError("besselBeam: mode must be on the subluminal branch");
  const double omega = omegaOf(mode);
  const double profile = p.rho == 0.0 ? 1.0 : j0_of_product(sub->Q, p.rho);
  return {profile, phase_of(sub->kz, p.z, omega, p.t)};
}

ComplexField besselBeam(const SpacetimePoint& p, const ModeSpec& mode) {
  return besselBeamSample(p, mode).field();
}

ModeSample superluminalModeSample(const SpacetimePoint& p, const ModeSpec& mode) {
  const auto* sup = std::get_if<Superluminal>(&mode.kind);
  if (!sup) throw DomainError("superluminalMode: mode must be on the superluminal branch");
  if (!(p.rho > 0.0)) {
    throw DomainError("superluminalMode: rho must be > 0 (K0 diverges on the axis)");
  }
  const double omega = omegaOf(mode);
  return {k0_of_product(sup->q, p.rho), phase_of(sup->kz, p.z, omega, p.t)};
}

ComplexField superluminalMode(const SpacetimePoint& p, const ModeSpec& mode) {
  return superluminalModeSample(p, mode).field();
}

ComplexField modeField(const SpacetimePoint& p, const ModeSpec& mode) {
  return mode.isSuperluminalBranch() ? superluminalMode(p, mode) : besselBeam(p, mode);
}

ComplexField kgResidual(const PointField& field, const SpacetimePoint& p, double h,
                        const Params& params) {
  params.validate();
  if (!(h > 0.0)) throw DomainError("kgResidual: step h must be > 0");
  if (!(p.rho > h)) throw DomainError("kgResidual: stencil crosses the axis (need rho > h)");

  // Steps snapped so that x + h is exact; otherwise rounding of the stencil
  // coordinates leaks into the 1/h^2 differences.
  auto snap = [](double x, double step) { return (x + step) - x; };
  const double hr = snap(p.rho, h);
  const double hz = snap(p.z, h);
  const double ht = snap(p.t, h / params.c);

  auto at = [&](double drho, double dz, double dt) {
    return field({p.rho + drho, p.z + dz, p.t + dt});
  };
  const ComplexField center = at(0, 0, 0);
  const double c2 = params.c * params.c;

  const ComplexField d2t = (at(0, 0, ht) - 2.0 * center + at(0, 0, -ht)) / (c2 * ht * ht);
  const ComplexField d2z = (at(0, hz, 0) - 2.0 * center + at(0, -hz, 0)) / (hz * hz);
  const ComplexField rp = at(hr, 0, 0);
  const ComplexField rm = at(-hr, 0, 0);
  const ComplexField d2rho = (rp - 2.0 * center + rm) / (hr * hr);
  const ComplexField d1rho = (rp - rm) / (2.0 * hr);

  return d2t - d2z - (d2rho + d1rho / p.rho) + params.mu * params.mu * center;
}

std::vector<ComplexField> evaluateGrid(const PointField& field,
                                       std::span<const SpacetimePoint> points,
                                       unsigned threads) {
  std::vector<ComplexField> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = field(points[i]); }, threads);
  return out;
}

}  // namespace kgsol
