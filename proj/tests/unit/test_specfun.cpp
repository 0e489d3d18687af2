#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kgsol/domain.hpp"
#include "kgsol/specfun.hpp"
#include "support.hpp"

using namespace kgsol;
using kgsol::testing::relErr;

TEST_CASE("J0 reference values") {
  CHECK(besselJ0(0.0) == 1.0);
  CHECK(std::abs(besselJ0(2.404825557695773)) <= 1e-12);
  CHECK(std::abs(besselJ0(1.0) - 0.7651976865579666) <= 1e-15);
  CHECK(besselJ0(-3.7) == besselJ0(3.7));
}

TEST_CASE("J1 reference values and parity") {
  CHECK(besselJ1(0.0) == 0.0);
  CHECK(std::abs(besselJ1(1.0) - 0.4400505857449335) <= 1e-15);
  CHECK(besselJ1(-0.7) == -besselJ1(0.7));
}

TEST_CASE("K0 reference values") {
  CHECK(relErr(besselK0(1.0), 0.42102443824070834) <= 1e-14);
  const double x = 1e-8;
  CHECK(std::abs(besselK0(x) + std::log(x / 2) + std::numbers::egamma) <= 1e-12);
  const double k100 = besselK0(100.0);
  CHECK(k100 > 0.0);
  CHECK(k100 < 1e-40);
}

TEST_CASE("K1 reference values") {
  CHECK(relErr(besselK1(1.0), 0.6019072301972346) <= 1e-14);
  CHECK(std::abs(1e-8 * besselK1(1e-8) - 1.0) <= 1e-10);
  // d/dx [x K1(x)] = -x K0(x) at x = 2.
  const double h = 1e-5;
  auto xk1 = [](double x) { return x * besselK1(x); };
  const double d = (xk1(2 - 2 * h) - 8 * xk1(2 - h) + 8 * xk1(2 + h) - xk1(2 + 2 * h)) / (12 * h);
  CHECK(std::abs(d + 2.0 * besselK0(2.0)) <= 1e-8);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(besselK0(0.0), DomainError);
  CHECK_THROWS_AS(besselK1(-1.0), DomainError);
  CHECK_THROWS_AS(besselJ0(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(besselJ1(std::numeric_limits<double>::infinity()), DomainError);
  CHECK(besselK0(1e4) == 0.0);
  CHECK(besselK1(800.0) == 0.0);
}

TEST_CASE("oracle table agreement") {
  const auto rows = kgsol::testing::loadOracle(KGSOL_TEST_ORACLE);
  REQUIRE(rows.size() == 1000);
  double worst = 0.0;
  for (const auto& r : rows) {
    const auto res = bessel(r.kind, r.x);
    const double e = kgsol::testing::oracleError(r, res.value);
    worst = std::max(worst, e);
    CHECK(res.estimatedRelError <= 1e-12);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("paired K evaluation matches the single ones") {
  for (double x : {0.01, 0.5, 2.0, 2.5, 30.0}) {
    const auto p = besselK01(x);
    CHECK(p.k0 == besselK0(x));
    CHECK(p.k1 == besselK1(x));
  }
}

TEST_CASE("derivative identities by fourth-order differences") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> u(0.1, 50.0);
  const double h = 1e-5;
  auto d4 = [h](double (*f)(double), double x) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
  };
  double worstJ = 0.0, worstK = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    worstJ = std::max(worstJ, std::abs(d4(besselJ0, x) + besselJ1(x)));
    worstK = std::max(worstK, std::abs(d4(besselK0, x) + besselK1(x)));
  }
  CHECK(worstJ <= 1e-8);
  CHECK(worstK <= 1e-8);
}

TEST_CASE("K positive and decreasing, J0 bounded") {
  double prev0 = std::numeric_limits<double>::infinity(), prev1 = prev0;
  for (double x = 1e-6; x < 600.0; x *= 1.1) {
    const double k0 = besselK0(x), k1 = besselK1(x);
    CHECK(k0 > 0.0);
    CHECK(k1 > 0.0);
    CHECK(k0 < prev0);
    CHECK(k1 < prev1);
    prev0 = k0;
    prev1 = k1;
  }
  for (double x = 0.0; x < 1e6; x = x * 1.01 + 0.01) CHECK(std::abs(besselJ0(x)) <= 1.0);
}

TEST_CASE("regime crossovers are continuous") {
  for (double x : {2.0, 25.0}) {
    const double lo = std::nextafter(x, 0.0), hi = std::nextafter(x, 100.0);
    CHECK(std::abs(besselJ0(lo) - besselJ0(hi)) <= 1e-14);
    CHECK(std::abs(besselJ1(lo) - besselJ1(hi)) <= 1e-14);
  }
  const double lo = std::nextafter(2.0, 0.0), hi = std::nextafter(2.0, 3.0);
  CHECK(relErr(besselK0(lo), besselK0(hi)) <= 1e-13);
  CHECK(relErr(besselK1(lo), besselK1(hi)) <= 1e-13);
}

TEST_CASE("kind names") {
  CHECK(std::string(to_string(BesselKind::K1)) == "K1");
}
