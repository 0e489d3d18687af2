#include "kgsol/dispersion.hpp"

#include <cmath>
#include <string>

namespace kgsol {

ModeSpec ModeSpec::subluminal(double Q, double kz, Params params) {
  return ModeSpec{Subluminal{Q, kz}, params};
}

ModeSpec ModeSpec::superluminal(double q, double kz, Params params) {
  return ModeSpec{Superluminal{q, kz}, params};
}

double ModeSpec::kz() const {
  return std::visit([](const auto& m) { return m.kz; }, kind);
}

double ModeSpec::transverse() const {
  if (const auto* s = std::get_if<Subluminal>(&kind)) return s->Q;
  return std::get<Superluminal>(kind).q;
}

bool ModeSpec::hasSuperluminalGroupVelocity() const {
  const auto* s = std::get_if<Superluminal>(&kind);
  return s && s->q > params.mu;
}

void ModeSpec::validate() const {
  params.validate();
  if (!std::isfinite(kz())) throw DomainError("ModeSpec: kz must be finite");
  if (const auto* s = std::get_if<Subluminal>(&kind)) {
    if (!(s->Q > 0.0) || !std::isfinite(s->Q)) {
      throw DomainError("ModeSpec: subluminal Q must be > 0");
    }
    return;
  }
  const auto& s = std::get<Superluminal>(kind);
  if (!(s.q > 0.0) || !std::isfinite(s.q)) {
    throw DomainError("ModeSpec: superluminal q must be > 0");
  }
  const double gap = s.q * s.q - params.mu * params.mu;
  if (s.kz * s.kz < gap) {
    throw DomainError("ModeSpec: imaginary omega; superluminal branch needs |kz| >= " +
                      std::to_string(std::sqrt(gap)));
  }
}

double omegaOf(const ModeSpec& mode) {
  mode.validate();
  const double mu = mode.params.mu;
  const double c = mode.params.c;
  if (const auto* s = std::get_if<Subluminal>(&mode.kind)) {
    return c * std::sqrt(s->kz * s->kz + s->Q * s->Q + mu * mu);
  }
  const auto& s = std::get<Superluminal>(mode.kind);
  // (kz - q + mu)-style factoring keeps q = mu exact: omega = c|kz|.
  const double radicand = s.kz * s.kz + (mu - s.q) * (mu + s.q);
  return c * std::sqrt(radicand > 0.0 ? radicand : 0.0);
}

double kzOfOmega(double omega, double q, const Params& params, Branch branch) {
  params.validate();
  if (!std::isfinite(omega) || omega < 0.0) {
    throw DomainError("kzOfOmega: omega must be finite and >= 0");
  }
  if (!(q > 0.0)) throw DomainError("kzOfOmega: q must be > 0");
  const double w = omega / params.c;
  const double radicand = w * w + (q - params.mu) * (q + params.mu);
  if (radicand < 0.0) {
    throw DomainError("kzOfOmega: (omega/c)^2 + q^2 - mu^2 < 0, no real kz");
  }
  const double kz = std::sqrt(radicand);
  return branch == Branch::Plus ? kz : -kz;
}

GroupVelocity groupVelocity(const ModeSpec& mode) {
  const double omega = omegaOf(mode);
  if (omega == 0.0) return {};
  const double c = mode.params.c;
  return {c * c * mode.kz() / omega};
}

double phaseVelocity(const ModeSpec& mode) {
  const double kz = mode.kz();
  if (kz == 0.0) throw DomainError("phaseVelocity: kz = 0");
  return omegaOf(mode) / std::abs(kz);
}

DispersionPoint dispersionPoint(const ModeSpec& mode) {
  DispersionPoint p;
  p.omega = omegaOf(mode);
  p.kz = mode.kz();
  if (p.kz != 0.0) p.vPhase = p.omega / std::abs(p.kz);
  p.vGroup = groupVelocity(mode).value;
  return p;
}

}  // namespace kgsol
