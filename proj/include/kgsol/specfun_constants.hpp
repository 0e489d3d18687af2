#pragma once

// Regime boundaries for the Bessel evaluators. Chosen by sweeping against the
// mpmath table in tests/data/specfun_oracle.csv (scripts/gen_specfun_oracle.py).

namespace kgsol::specfun_constants {

/// |x| at or below this uses the ascending power series for J0/J1.
inline constexpr double kJSeriesMax = 2.0;
/// |x| at or above this uses the Hankel asymptotic expansion for J0/J1;
/// between the two, Miller backward recurrence.
inline constexpr double kJAsymptoticMin = 25.0;
/// Extra recurrence depth above |x| for the Miller start index.
inline constexpr int kMillerPadding = 60;
/// x at or below this uses the logarithmic series for K0/K1; above it,
/// Steed's continued fraction.
inline constexpr double kKSeriesMax = 2.0;

}  // namespace kgsol::specfun_constants
