#include "kgsol/propagator.hpp"

#include <cmath>
#include <numbers>

#include "kgsol/parallel.hpp"
#include "kgsol/specfun.hpp"

namespace kgsol {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

double spacelikeClosedForm(double lambdaTilde, const Params& params) {
  params.validate();
  if (!(lambdaTilde > 0.0)) {
    throw DomainError("spacelikeClosedForm: lambdaTilde must be > 0 (point inside or on the cone)");
  }
  if (!(params.mu > 0.0)) throw DomainError("spacelikeClosedForm: mu must be > 0");
  const double x = params.mu * lambdaTilde;
  return params.mu * besselK1(x) / (kTwoPi * lambdaTilde);
}

QuadratureResult spacelikeQuadrature(double rho, double tauTilde, const Params& params,
                                     const QuadratureSpec& spec) {
  params.validate();
  if (!(rho > 0.0)) {
    throw DomainError("spacelikeQuadrature: rho must be > 0; the q integral diverges on the axis");
  }
  if (!(tauTilde >= 0.0)) throw DomainError("spacelikeQuadrature: tauTilde must be >= 0");
  const double mu = params.mu;
  const double lambda_tilde = std::hypot(rho, tauTilde);
  if (mu > 0.0 && mu * lambda_tilde < kMinSpacelikeInterval) {
    throw DomainError("spacelikeQuadrature: too close to the light cone (mu * lambdaTilde < " +
                      std::to_string(kMinSpacelikeInterval) + ")");
  }

  QuadratureResult r;
  if (tauTilde * mu > kSubstitutionThreshold) {
    // q dq = u du with u = sqrt(q^2 - mu^2); smooth at the lower endpoint.
    const Integrand f = [=](double u) {
      return u * besselK0(rho * std::sqrt(u * u + mu * mu)) * besselJ0(tauTilde * u);
    };
    r = integrateDecaying(f, 0.0, spec);
  } else {
    const Integrand f = [=](double q) {
      const double u2 = (q - mu) * (q + mu);
      const double j = tauTilde == 0.0 ? 1.0 : besselJ0(tauTilde * std::sqrt(u2 > 0.0 ? u2 : 0.0));
      return q * besselK0(q * rho) * j;
    };
    r = integrateDecaying(f, mu, spec);
  }
  r.value /= kTwoPi;
  r.errorEstimate /= kTwoPi;
  return r;
}

PropagatorCheckReport checkSpacelikeIdentity(double rho, double tauTilde, const Params& params,
                                             const QuadratureSpec& spec) {
  PropagatorCheckReport rep;
  rep.point = {rho, tauTilde, 0.0};
  rep.quadrature = spacelikeQuadrature(rho, tauTilde, params, spec);
  rep.lhs = rep.quadrature.value;
  rep.rhs = spacelikeClosedForm(std::hypot(rho, tauTilde), params);
  rep.relError = std::abs(rep.lhs - rep.rhs) / std::max(std::abs(rep.rhs), 1e-300);
  return rep;
}

std::vector<PropagatorCheckReport> checkSpacelikeGrid(const std::vector<double>& rhos,
                                                      const std::vector<double>& tauTildes,
                                                      const Params& params,
                                                      const QuadratureSpec& spec,
                                                      unsigned threads) {
  std::vector<PropagatorCheckReport> out(rhos.size() * tauTildes.size());
  parallel_for(
      out.size(),
      [&](std::size_t i) {
        out[i] = checkSpacelikeIdentity(rhos[i / tauTildes.size()],
                                        tauTildes[i % tauTildes.size()], params, spec);
      },
      threads);
  return out;
}

QuadratureResult hyperbolicPhaseIntegral(double A, double B, double M,
                                         const QuadratureSpec& spec) {
  if (!(A > 0.0) || !std::isfinite(B) || !(M >= 0.0)) {
    throw DomainError("hyperbolicPhaseIntegral: need A > 0, finite B, M >= 0");
  }
  const double D = (A - std::abs(B)) * (A + std::abs(B));  // A^2 - B^2
  if (D == 0.0) throw DomainError("hyperbolicPhaseIntegral: A = |B| (light cone)");

  // psi = s * phase is increasing from k0 on; sin(phase) = s * sin(psi).
  const double s = A + B > 0.0 ? 1.0 : -1.0;
  const double k0 = (s > 0.0 && B < 0.0) ? std::abs(B) * M / std::sqrt(D) : 0.0;
  auto phase = [=](double k) { return A * std::sqrt(k * k + M * M) + B * k; };
  const double psi0 = s * phase(k0);
  const double n0 = std::floor(psi0 / std::numbers::pi) + 1.0;
  // Closed-form inverse of psi(k) = P: roots of D k^2 + 2 s P B k + A^2 M^2 - P^2.
  // For |B| > A the squared equation has a spurious root; the true one is the
  // smaller for B > 0 and the larger for B < 0.
  const bool plus_root = D > 0.0 || B > 0.0;
  auto node = [=](std::size_t i) {
    const double P = (n0 + static_cast<double>(i)) * std::numbers::pi;
    const double disc = P * P - D * M * M;
    const double root = A * std::sqrt(disc > 0.0 ? disc : 0.0);
    return (-s * P * B + (plus_root ? root : -root)) / D;
  };
  const Integrand f = [=](double k) {
    const double r = std::sqrt(k * k + M * M);
    if (r == 0.0) return A + B;  // limit of sin((A + B) k) / k
    return std::sin(A * r + B * k) / r;
  };
  return integrateBetweenNodes(f, 0.0, node, 0, spec);
}

namespace {

// Sum of the two single-phase integrals for A sqrt(k^2+M^2) +- B k.
KernelValue twoPhaseKernel(double A, double B, double M, double prefactor,
                           const QuadratureSpec& spec) {
  const auto plus = hyperbolicPhaseIntegral(A, B, M, spec);
  const auto minus = hyperbolicPhaseIntegral(A, -B, M, spec);
  KernelValue out;
  out.value = prefactor * (plus.value + minus.value);
  out.quadrature.value = out.value;
  out.quadrature.errorEstimate = std::abs(prefactor) * (plus.errorEstimate + minus.errorEstimate);
  out.quadrature.panelsUsed = plus.panelsUsed + minus.panelsUsed;
  out.quadrature.converged = plus.converged && minus.converged;
  return out;
}

}  // namespace

KernelValue innerKernelTimelike(double M, double z, double t, const Params& params,
                                const QuadratureSpec& spec) {
  params.validate();
  if (!(M > 0.0)) throw DomainError("innerKernelTimelike: M must be > 0");
  const double ct = params.c * std::abs(t);
  if (ct == std::abs(z)) throw DomainError("innerKernelTimelike: event on the light cone");
  if (ct == 0.0) {
    KernelValue zero;  // sin(0) integrand
    zero.quadrature.converged = true;
    zero.outsideDomain = true;
    return zero;
  }
  // 2 int_0^inf sin(c|t| r) cos(k z) / (c r) dk with r = sqrt(k^2 + M^2)
  KernelValue out = twoPhaseKernel(ct, z, M, 1.0 / params.c, spec);
  out.outsideDomain = ct < std::abs(z);
  return out;
}

KernelValue innerKernelSpacelike(double kappa, double z, double t, const Params& params,
                                 const QuadratureSpec& spec) {
  params.validate();
  if (!(kappa >= 0.0)) throw DomainError("innerKernelSpacelike: kappa must be >= 0");
  const double az = std::abs(z);
  const double ct = params.c * std::abs(t);
  if (az == ct) throw DomainError("innerKernelSpacelike: event on the light cone");
  if (az == 0.0) {
    KernelValue zero;
    zero.quadrature.converged = true;
    zero.outsideDomain = true;
    return zero;
  }
  // omega = c w: c * 2 int_0^inf sin(|z| r) cos(c t w) / r dw, r = sqrt(w^2 + kappa^2)
  KernelValue out = twoPhaseKernel(az, ct, kappa, params.c, spec);
  out.outsideDomain = az < ct;
  return out;
}

RegulatedResult timelikePropagator(double rho, double tau, const Params& params,
                                   const QuadratureSpec& spec, Regulator regulator) {
  params.validate();
  if (!(rho >= 0.0) || !(tau > 0.0)) {
    throw DomainError("timelikePropagator: need rho >= 0 and tau > 0");
  }
  if (tau < kMinTimelikeRatio * rho) {
    throw DomainError(
        "timelikePropagator: tau/rho < 1.1; the integral is singular on the light cone and "
        "only distributionally defined there");
  }
  const double mu2 = params.mu * params.mu;
  const Integrand base = [=](double Q) {
    const double jr = rho == 0.0 ? 1.0 : besselJ0(Q * rho);
    return Q * jr * besselJ0(tau * std::sqrt(Q * Q + mu2)) / kTwoPi;
  };
  return integrateRegulated(regulate(base, regulator), 0.0, spec, regulator);
}

}  // namespace kgsol
