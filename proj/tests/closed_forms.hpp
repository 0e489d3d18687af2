#pragma once

// Integrals with known values, spread over the three integrators.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "kgsol/quadrature.hpp"
#include "kgsol/specfun.hpp"

namespace kgsol::testing {

struct ClosedFormCase {
  const char* name;
  std::function<QuadratureResult(const QuadratureSpec&)> run;
  double exact;
};

inline std::vector<ClosedFormCase> closedFormSet() {
  using K = OscillatoryKernel;
  std::vector<ClosedFormCase> v;
  auto interval = [&](const char* n, Integrand f, double a, double b, double exact) {
    v.push_back({n, [=](const QuadratureSpec& s) { return integrateInterval(f, a, b, s); }, exact});
  };
  auto decaying = [&](const char* n, Integrand f, double a, double exact) {
    v.push_back({n, [=](const QuadratureSpec& s) { return integrateDecaying(f, a, s); }, exact});
  };
  auto osc = [&](const char* n, Integrand f, K k, double w, double exact) {
    v.push_back({n, [=](const QuadratureSpec& s) { return integrateOscillatoryBessel(f, k, w, 0.0, s); },
                 exact});
  };
  interval("sin", [](double x) { return std::sin(x); }, 0, std::numbers::pi, 2.0);
  interval("exp", [](double x) { return std::exp(x); }, 0, 1, std::exp(1.0) - 1);
  interval("lorentz", [](double x) { return 1 / (1 + x * x); }, 0, 1, std::numbers::pi / 4);
  interval("sqrt", [](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3);
  interval("log", [](double x) { return std::log(x); }, 0, 1, -1.0);
  interval("cos20", [](double x) { return std::cos(20 * x); }, 0, 1, std::sin(20.0) / 20);
  interval("rsqrt", [](double x) { return 1 / std::sqrt(x); }, 0, 1, 2.0);
  interval("peak", [](double x) { return 1 / (1e-4 + (x - 0.3) * (x - 0.3)); }, 0, 1,
           100 * (std::atan(0.7 / 1e-2) + std::atan(0.3 / 1e-2)));
  interval("x^7", [](double x) { return std::pow(x, 7); }, -1, 2, (256.0 - 1) / 8);
  interval("abs", [](double x) { return std::abs(x - 0.37); }, 0, 1,
           0.5 * (0.37 * 0.37 + 0.63 * 0.63));
  decaying("exp", [](double x) { return std::exp(-x); }, 0, 1.0);
  decaying("exp0.5", [](double x) { return std::exp(-0.5 * x); }, 0, 2.0);
  decaying("exp10", [](double x) { return std::exp(-10 * x); }, 0, 0.1);
  decaying("gauss", [](double x) { return x * std::exp(-x * x); }, 0, 0.5);
  decaying("x2exp", [](double x) { return x * x * std::exp(-x); }, 0, 2.0);
  decaying("sech", [](double x) { return 1 / std::cosh(x); }, 0, std::numbers::pi / 2);
  decaying("expcos", [](double x) { return std::exp(-x) * std::cos(x); }, 0, 0.5);
  decaying("expsin3", [](double x) { return std::exp(-x) * std::sin(3 * x); }, 0, 0.3);
  decaying("xK0", [](double x) { return x * besselK0(x); }, 1, besselK1(1.0));
  decaying("K0", [](double x) { return besselK0(x); }, 0, std::numbers::pi / 2);
  decaying("x3K0", [](double x) { return x * besselK0(2 * x); }, 0, 0.25);
  decaying("shifted", [](double x) { return std::exp(-(x - 3)); }, 3, 1.0);
  osc("J0exp", [](double x) { return std::exp(-x); }, K::BesselJ0, 1, 1 / std::sqrt(2.0));
  osc("J0exp.5", [](double x) { return std::exp(-0.5 * x); }, K::BesselJ0, 1, 1 / std::sqrt(1.25));
  osc("J0exp.2", [](double x) { return std::exp(-0.2 * x); }, K::BesselJ0, 1, 1 / std::sqrt(1.04));
  osc("J0", [](double) { return 1.0; }, K::BesselJ0, 1, 1.0);
  osc("J0w3", [](double) { return 1.0; }, K::BesselJ0, 3, 1.0 / 3);
  osc("xJ0gauss", [](double x) { return x * std::exp(-x * x); }, K::BesselJ0, 1,
      std::exp(-0.25) / 2);
  osc("dirichlet", [](double x) { return 1 / x; }, K::Sine, 1, std::numbers::pi / 2);
  osc("dirichlet3", [](double x) { return 1 / x; }, K::Sine, 3, std::numbers::pi / 2);
  osc("sinexp", [](double x) { return std::exp(-0.5 * x); }, K::Sine, 1, 1 / 1.25);
  osc("cosexp", [](double x) { return std::exp(-0.5 * x); }, K::Cosine, 1, 0.5 / 1.25);
  osc("coslor", [](double x) { return 1 / (1 + x * x); }, K::Cosine, 1, std::numbers::pi / 2 * std::exp(-1.0));
  osc("sinx2", [](double x) { return x / (1 + x * x); }, K::Sine, 2, std::numbers::pi / 2 * std::exp(-2.0));
  osc("J0lor", [](double x) { return x / std::pow(1 + x * x, 1.5); }, K::BesselJ0, 1,
      std::exp(-1.0));
  return v;
}


}  // namespace kgsol::testing
