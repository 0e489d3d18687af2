#include <cmath>
#include <random>

#include "doctest.h"
#include "kgsol/domain.hpp"
#include "kgsol/dispersion.hpp"

using namespace kgsol;

TEST_CASE("omegaOf reference values") {
  CHECK(omegaOf(ModeSpec::subluminal(1.0, 0.0, {0.0, 1.0})) == 1.0);
  CHECK(omegaOf(ModeSpec::superluminal(2.0, 2.0, {1.0, 1.0})) == 1.0);
  for (double kz : {-7.5, 0.0, 0.3, 12.0}) {
    CHECK(omegaOf(ModeSpec::superluminal(1.0, kz, {1.0, 1.0})) == std::abs(kz));
    CHECK(omegaOf(ModeSpec::superluminal(2.5, kz, {2.5, 3.0})) == 3.0 * std::abs(kz));
  }
}

TEST_CASE("imaginary frequency names the minimum kz") {
  try {
    omegaOf(ModeSpec::superluminal(2.0, 1.0, {}));
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("1.73205") != std::string::npos);
  }
  CHECK_THROWS_AS((ModeSpec::subluminal(0.0, 1.0).validate()), DomainError);
  CHECK_THROWS_AS((ModeSpec::superluminal(-1.0, 1.0).validate()), DomainError);
}

TEST_CASE("branch relation reproduced") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Params p{u(rng), u(rng)};
    const double Q = u(rng), kz = u(rng) - 5.0;
    const double w = omegaOf(ModeSpec::subluminal(Q, kz, p));
    const double lhs = (w / p.c) * (w / p.c) - kz * kz - p.mu * p.mu;
    CHECK(std::abs(lhs - Q * Q) <= 1e-14 * ((w / p.c) * (w / p.c)) * 4);
  }
}

TEST_CASE("kzOfOmega") {
  CHECK(kzOfOmega(0.0, 1.0, {}, Branch::Plus) == 0.0);
  CHECK(kzOfOmega(1.0, 2.0, {}, Branch::Plus) == 2.0);
  CHECK(kzOfOmega(1.0, 2.0, {}, Branch::Minus) == -2.0);
  CHECK_THROWS_AS((kzOfOmega(0.1, 0.5, {}, Branch::Plus)), DomainError);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Params p{u(rng), 1.0};
    const double q = p.mu + u(rng) + 1e-3;
    const double w = u(rng) + 1e-3;
    const double kz = kzOfOmega(w, q, p, i % 2 ? Branch::Plus : Branch::Minus);
    // omega^2 = kz^2 + mu^2 - q^2 cancels; bound scales with the summands
    const double scale = (kz * kz + p.mu * p.mu + q * q) / w;
    CHECK(std::abs(omegaOf(ModeSpec::superluminal(q, kz, p)) - w) <= 4e-16 * scale + 1e-15 * w);
  }
}

TEST_CASE("group velocity reference values") {
  CHECK(*groupVelocity(ModeSpec::subluminal(1.0, 0.0, {3.0, 1.0})).value == 0.0);
  CHECK(*groupVelocity(ModeSpec::superluminal(2.0, 2.0, {})).value == 2.0);
  const double excess = *groupVelocity(ModeSpec::superluminal(2.0, 1000.0, {})).value - 1.0;
  CHECK(excess >= 1.3e-6);
  CHECK(excess <= 1.7e-6);
  CHECK(groupVelocity(ModeSpec::superluminal(5.0, 4.0, {3.0, 1.0})).diverges());
}

TEST_CASE("phase velocity") {
  CHECK(phaseVelocity(ModeSpec::superluminal(2.0, 2.0, {})) == 0.5);
  const auto m = ModeSpec::subluminal(1.0, 1.0, {0.0, 1.0});
  CHECK(phaseVelocity(m) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(*groupVelocity(m).value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS((phaseVelocity(ModeSpec::subluminal(1.0, 0.0))), DomainError);
}

TEST_CASE("velocity properties on random modes") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const Params p{3 * u(rng), 0.5 + u(rng)};
    const double kz = 20 * (u(rng) - 0.5);
    if (kz == 0.0) continue;
    const auto sub = ModeSpec::subluminal(0.01 + 5 * u(rng), kz, p);
    const double vg = *groupVelocity(sub).value;
    CHECK(std::abs(vg) < p.c);
    CHECK(std::abs(phaseVelocity(sub) * vg - p.c * p.c * (kz > 0 ? 1 : -1)) <= 1e-13 * p.c * p.c);

    const double q = p.mu + 0.01 + 3 * u(rng);
    const double kmin = std::sqrt(q * q - p.mu * p.mu);
    const double kzs = kmin * (1.001 + 10 * u(rng));
    const auto sup = ModeSpec::superluminal(q, kzs, p);
    REQUIRE(sup.hasSuperluminalGroupVelocity());
    const double vgs = *groupVelocity(sup).value;
    CHECK(vgs > p.c);
    CHECK(std::abs(phaseVelocity(sup) * vgs - p.c * p.c) <= 1e-13 * p.c * p.c);
    CHECK(phaseVelocity(sup) < p.c);
  }
}

TEST_CASE("superluminal group velocity decreases toward c") {
  double prev = std::numeric_limits<double>::infinity();
  for (double kz = 1.8; kz < 1e5; kz *= 1.3) {
    const double v = *groupVelocity(ModeSpec::superluminal(2.0, kz, {})).value;
    CHECK(v > 1.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("group velocity is the derivative of omega") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Params p{2 * u(rng), 0.5 + u(rng)};
    const double kz = 1 + 10 * u(rng);
    const double h = 1e-6 * std::max(1.0, std::abs(kz));
    for (int branch = 0; branch < 2; ++branch) {
      const double tr = branch ? p.mu + 0.5 * u(rng) : 0.1 + u(rng);
      auto make = [&](double k) {
        return branch ? ModeSpec::superluminal(tr, k, p) : ModeSpec::subluminal(tr, k, p);
      };
      if (branch && kz * kz < tr * tr - p.mu * p.mu + 0.1) continue;
      const double fd = (omegaOf(make(kz + h)) - omegaOf(make(kz - h))) / (2 * h);
      const double vg = *groupVelocity(make(kz)).value;
      CHECK(std::abs(fd - vg) <= 1e-6 * std::abs(vg));
    }
  }
}

TEST_CASE("branch consistency for q < mu") {
  // A Super mode with q < mu equals a Sub mode of transverse wavenumber
  // sqrt(mu^2 - q^2) carried with zero mass.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double mu = 0.5 + 3 * u(rng), q = mu * (0.01 + 0.98 * u(rng));
    const double kz = 10 * (u(rng) - 0.5);
    const double wSup = omegaOf(ModeSpec::superluminal(q, kz, {mu, 1.0}));
    const double wSub = omegaOf(ModeSpec::subluminal(std::sqrt(mu * mu - q * q), kz, {0.0, 1.0}));
    CHECK(std::abs(wSup - wSub) <= 1e-14 * wSup * 4);
    CHECK_FALSE(ModeSpec::superluminal(q, kz, {mu, 1.0}).hasSuperluminalGroupVelocity());
  }
}

TEST_CASE("large-kz excess matches the expansion") {
  const Params p{};
  for (double q : {1.5, 2.0, 4.0}) {
    for (double kz = 100 * q; kz < 1e5; kz *= 2) {
      const double excess = *groupVelocity(ModeSpec::superluminal(q, kz, p)).value - p.c;
      const double predicted = p.c * (q * q - p.mu * p.mu) / (2 * kz * kz);
      CHECK(std::abs(excess - predicted) <= 0.05 * predicted);
    }
  }
}

TEST_CASE("dispersion point bundles the pieces") {
  const auto d = dispersionPoint(ModeSpec::superluminal(2.0, 2.0, {}));
  CHECK(d.omega == 1.0);
  CHECK(d.kz == 2.0);
  CHECK(*d.vPhase == 0.5);
  CHECK(*d.vGroup == 2.0);
  const auto z = dispersionPoint(ModeSpec::subluminal(1.0, 0.0, {}));
  CHECK_FALSE(z.vPhase.has_value());
}
