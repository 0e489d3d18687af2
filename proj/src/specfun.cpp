#include "kgsol/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kgsol/domain.hpp"
#include "kgsol/specfun_constants.hpp"

namespace kgsol {
namespace {

using namespace specfun_constants;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kEuler = std::numbers::egamma;

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(name) + ": argument must be finite");
  }
}

// Evaluators run in extended precision and round once on return, so
// neighbouring arguments carry smooth (sub-ulp) errors. Finite differences of
// the mode fields depend on that.
using real = long double;
constexpr real kEpsX = std::numeric_limits<real>::epsilon();
constexpr real kEulerX = std::numbers::egamma_v<real>;

// Ascending series: J0 = sum (-x^2/4)^k / (k!)^2, J1 = (x/2) sum (-x^2/4)^k / (k!(k+1)!).
real j0_series(real x) {
  const real y = -0.25 * x * x;
  real term = 1.0;
  real sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= y / (real(k) * k);
    sum += term;
    if (std::abs(term) < 0.25 * kEpsX * std::abs(sum)) break;
  }
  return sum;
}

real j1_series(real x) {
  const real y = -0.25 * x * x;
  real term = 1.0;
  real sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= y / (real(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 0.25 * kEpsX * std::abs(sum)) break;
  }
  return 0.5 * x * sum;
}

struct JPair {
  real j0;
  real j1;
};

struct RealPair {
  real k0;
  real k1;
};

// Miller's backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalised with
// J0 + 2 (J2 + J4 + ...) = 1. x > 0.
JPair j01_miller(real x) {
  int n = static_cast<int>(x) + kMillerPadding;
  if (n % 2) ++n;
  const real two_over_x = 2.0 / x;
  real jp = 0.0;  // J_{k+1}
  real jk = 1e-4000L;
  real even_sum = 0.0;
  real j1 = 0.0;
  for (int k = n; k > 0; --k) {
    const real jm = k * two_over_x * jk - jp;
    jp = jk;
    jk = jm;
    // jk now holds J_{k-1}
    if (std::abs(jk) > 1e4000L) {
      jk *= 1e-4000L;
      jp *= 1e-4000L;
      even_sum *= 1e-4000L;
      j1 *= 1e-4000L;
    }
    if (k - 1 == 1) j1 = jk;
    if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += jk;
  }
  const real norm = jk + 2.0 * even_sum;
  return {jk / norm, j1 / norm};
}

// Hankel expansion J_nu(x) = sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
// chi = x - (nu/2 + 1/4) pi, for x >= kJAsymptoticMin.
void hankel_pq(int nu, real x, real& p, real& q) {
  const real mu4 = 4.0 * nu * nu;
  real a = 1.0;  // a_k(nu) / x^k
  p = 1.0;
  q = 0.0;
  real prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    a *= (mu4 - real(2 * k - 1) * (2 * k - 1)) / (8.0 * k * x);
    const real mag = std::abs(a);
    if (mag > prev) break;  // asymptotic series started to diverge
    prev = mag;
    // P takes even k with sign (-1)^{k/2}; Q takes odd k with sign (-1)^{(k-1)/2}.
    switch (k % 4) {
      case 0: p += a; break;
      case 1: q += a; break;
      case 2: p -= a; break;
      case 3: q -= a; break;
    }
    if (mag < 0.1 * kEpsX) break;
  }
}

real j0_asymptotic(real x) {
  real p, q;
  hankel_pq(0, x, p, q);
  const real s = std::sin(x);
  const real c = std::cos(x);
  // cos(x - pi/4) = (c + s)/sqrt2, sin(x - pi/4) = (s - c)/sqrt2
  const real amp = std::sqrt(1.0 / (std::numbers::pi_v<real> * x));
  return amp * (p * (c + s) - q * (s - c));
}

real j1_asymptotic(real x) {
  real p, q;
  hankel_pq(1, x, p, q);
  const real s = std::sin(x);
  const real c = std::cos(x);
  // cos(x - 3pi/4) = (s - c)/sqrt2, sin(x - 3pi/4) = -(s + c)/sqrt2
  const real amp = std::sqrt(1.0 / (std::numbers::pi_v<real> * x));
  return amp * (p * (s - c) + q * (s + c));
}

// Logarithmic series about 0, x <= kKSeriesMax.
RealPair k01_series(real x) {
  const real y = 0.25 * x * x;
  const real log_half = std::log(0.5 * x);

  // K0 = -(ln(x/2) + gamma) I0 + sum_{k>=1} y^k/(k!)^2 H_k
  real t0 = 1.0;
  real i0 = 1.0;
  real harmonic = 0.0;
  real hsum = 0.0;
  // K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} y^k/(k!(k+1)!) (psi(k+1) + psi(k+2))
  real t1 = 1.0;
  real i1 = 1.0;
  real psi_sum = (-kEulerX) + (1.0 - kEulerX);
  real psum = psi_sum;
  for (int k = 1; k < 60; ++k) {
    t0 *= y / (real(k) * k);
    harmonic += 1.0 / k;
    i0 += t0;
    hsum += t0 * harmonic;

    t1 *= y / (real(k) * (k + 1));
    psi_sum = 2.0 * (harmonic - kEulerX) + 1.0 / (k + 1);
    i1 += t1;
    psum += t1 * psi_sum;
    if (t0 < 0.1 * kEpsX * i0 && t1 < 0.1 * kEpsX * i1) break;
  }
  const real k0 = -(log_half + kEulerX) * i0 + hsum;
  const real k1 = 1.0 / x + log_half * (0.5 * x * i1) - 0.25 * x * psum;
  return {k0, k1};
}

// Steed's continued fraction (Temme's CF2) for order 0, x > kKSeriesMax.
RealPair k01_steed(real x) {
  real b = 2.0 * (1.0 + x);
  real d = 1.0 / b;
  real h = d;
  real delh = d;
  real q1 = 0.0;
  real q2 = 1.0;
  const real a1 = 0.25;
  real q = a1;
  real c = a1;
  real a = -a1;
  real s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const real qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const real dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 0.5 * kEpsX) break;
  }
  h *= a1;
  const real k0 = std::sqrt(std::numbers::pi_v<real> / (2.0 * x)) * std::exp(-x) / s;
  const real k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

}  // namespace

double besselJ0(double x) {
  require_finite(x, "besselJ0");
  const double ax = std::abs(x);
  if (ax <= kJSeriesMax) return double(j0_series(ax));
  if (ax < kJAsymptoticMin) return double(j01_miller(ax).j0);
  return double(j0_asymptotic(ax));
}

double besselJ1(double x) {
  require_finite(x, "besselJ1");
  const double ax = std::abs(x);
  double v;
  if (ax <= kJSeriesMax) {
    v = double(j1_series(ax));
  } else if (ax < kJAsymptoticMin) {
    v = double(j01_miller(ax).j1);
  } else {
    v = double(j1_asymptotic(ax));
  }
  return x < 0.0 ? -v : v;
}

BesselKPair besselK01(double x) {
  if (!std::isfinite(x) && x > 0.0) return {0.0, 0.0};
  require_finite(x, "besselK");
  if (x <= 0.0) throw DomainError("besselK: argument must be > 0");
  const RealPair r = x <= kKSeriesMax ? k01_series(x) : k01_steed(x);
  return {double(r.k0), double(r.k1)};
}

double besselK0(double x) { return besselK01(x).k0; }
double besselK1(double x) { return besselK01(x).k1; }

SpecFunResult bessel(BesselKind kind, double x) {
  switch (kind) {
    case BesselKind::J0:
    case BesselKind::J1: {
      const double v = kind == BesselKind::J0 ? besselJ0(x) : besselJ1(x);
      const double ax = std::abs(x);
      const double err = ax <= kJSeriesMax ? 4.0 * kEps
                         : ax < kJAsymptoticMin ? 64.0 * kEps
                                                : 8.0 * kEps;
      return {v, err};
    }
    case BesselKind::K0:
    case BesselKind::K1: {
      const auto pair = besselK01(x);
      const double v = kind == BesselKind::K0 ? pair.k0 : pair.k1;
      double err = x <= kKSeriesMax ? 32.0 * kEps : 16.0 * kEps;
      if (v < std::numeric_limits<double>::min()) err = 1.0;  // subnormal or underflow
      return {v, err};
    }
  }
  return {};
}

const char* to_string(BesselKind kind) {
  switch (kind) {
    case BesselKind::J0: return "J0";
    case BesselKind::J1: return "J1";
    case BesselKind::K0: return "K0";
    case BesselKind::K1: return "K1";
  }
  return "?";
}

}  // namespace kgsol
