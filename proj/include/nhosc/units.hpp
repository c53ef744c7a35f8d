#pragma once

// Unit conversions between the internal natural-unit system (GeV^2, GeV,
// GeV^-1) and the user-facing units (eV^2, km). Two modes: Exact carries the
// full hbar*c constant, PaperRounded reproduces the conventional rounded
// 1.27 (and doubled 2.54) oscillation-phase factors. The modes differ only in
// phase arguments, never in amplitudes.

#include <cmath>

namespace nhosc {

enum class UnitsMode { PaperRounded, Exact };

inline constexpr double kGeV2PerEV2 = 1e-18;
inline constexpr double kEV2PerGeV2 = 1e18;

/// hbar * c in GeV * fm (CODATA).
inline constexpr double kHbarC_GeV_fm = 0.1973269804;

/// Oscillation phase factor in km^-1 GeV eV^-2: phase = factor * dm2[eV^2] * L[km] / E[GeV]
/// corresponds to dm2 * t / (4E) in natural units.
inline constexpr double kOscPhaseExact = 1.0 / (4.0 * kHbarC_GeV_fm);  // 1.2669327...
inline constexpr double kOscPhasePaper = 1.27;

inline constexpr double kInvGeVPerKmExact = 1e18 / kHbarC_GeV_fm;        // 5.0677307e18
inline constexpr double kInvGeVPerKmPaper = 4.0 * kOscPhasePaper * 1e18;  // 5.08e18

inline double osc_phase_factor(UnitsMode mode) {
    return mode == UnitsMode::Exact ? kOscPhaseExact : kOscPhasePaper;
}

/// Baseline to natural time. In PaperRounded mode the conversion is rescaled
/// so that every phase comes out built from the 1.27/2.54 factors.
inline double km_to_inverse_gev(double l_km, UnitsMode mode = UnitsMode::Exact) {
    return l_km * (mode == UnitsMode::Exact ? kInvGeVPerKmExact : kInvGeVPerKmPaper);
}

// 1e18 is exactly representable (2^18 * 5^18 < 2^53); dividing by it is the
// correctly-rounded conversion, unlike multiplying by the rounded 1e-18.
inline double ev2_to_gev2(double x) { return x / kEV2PerGeV2; }
inline double gev2_to_ev2(double x) { return x * kEV2PerGeV2; }

}  // namespace nhosc
