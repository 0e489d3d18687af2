#pragma once

// Bessel functions of integer order 0 and 1: J0, J1 (first kind) and the
// exponentially decaying modified functions K0, K1.
//
// Accuracy contract (checked against an mpmath table in the tests):
//   J0, J1: |error| <= 1e-12 * max(1, |J(x)|) for |x| <= 1e6
//   K0, K1: relative error <= 1e-12 for 1e-300 < x < 700
//
// Non-finite arguments, and x <= 0 for K0/K1, throw kgsol::DomainError.

namespace kgsol {

struct SpecFunResult {
  double value = 0.0;
  double estimatedRelError = 0.0;
};

double besselJ0(double x);
double besselJ1(double x);
double besselK0(double x);
double besselK1(double x);

/// K0 and K1 from one evaluation (the continued fraction yields both).
struct BesselKPair {
  double k0;
  double k1;
};
BesselKPair besselK01(double x);

enum class BesselKind { J0, J1, K0, K1 };

/// Value plus an error bound for the evaluation regime the argument falls
/// in. For J0/J1 the bound is relative to max(1, |value|).
SpecFunResult bessel(BesselKind kind, double x);

const char* to_string(BesselKind kind);

}  // namespace kgsol
