#include "kgsol/domain.hpp"

#include <algorithm>
#include <cmath>

namespace kgsol {

void Params::validate() const {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw DomainError("Params: mu must be finite and >= 0");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw DomainError("Params: c must be finite and > 0");
  }
}

IntervalClass classify(const SpacetimePoint& p, const Params& params) {
  const double ct = params.c * std::abs(p.t);
  const double az = std::abs(p.z);
  // z^2 - c^2 t^2 in factored form; exact zero on the 2D cone.
  const double zt = (az - ct) * (az + ct);
  const double rho2 = p.rho * p.rho;
  const double s = rho2 + zt;  // r^2 - c^2 t^2

  IntervalClass out;
  if (zt >= 0.0) out.tauTilde = std::sqrt(zt);
  if (zt <= 0.0) out.tau = std::sqrt(-zt);

  const double scale = std::max({ct * ct, rho2 + az * az, 1.0});
  if (std::abs(s) <= kLightlikeTolerance * scale) {
    out.kind = IntervalKind::Lightlike;
  } else if (s > 0.0) {
    out.kind = IntervalKind::Spacelike;
    out.lambdaTilde = std::sqrt(s);
  } else {
    out.kind = IntervalKind::Timelike;
    out.lambda = std::sqrt(-s);
  }
  return out;
}

std::string to_string(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::Timelike: return "timelike";
    case IntervalKind::Spacelike: return "spacelike";
    case IntervalKind::Lightlike: return "lightlike";
  }
  return "unknown";
}

}  // namespace kgsol
