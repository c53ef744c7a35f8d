#pragma once

// Non-Hermitian two-flavor Hamiltonian: construction, Hermitian/anti-Hermitian
// split, closed-form spectra, PT-regime classification and PT-commutation
// checks. Internal unit convention: mass-squared quantities in GeV^2, energies
// in GeV, times in GeV^-1 (the CLI layer converts eV^2 and km).

#include <cmath>
#include <string>

#include "nhosc/errors.hpp"
#include "nhosc/linalg2.hpp"

namespace nhosc {

/// Physical parameter set. mbar2 contributes only a global phase and cancels
/// in every probability; it defaults to zero.
struct OscillationParams {
    double energy = 1.0;  // E, GeV
    double dm2 = 0.0;     // mass-squared splitting, GeV^2
    double mbar2 = 0.0;   // mass-squared sum, GeV^2
    double theta = 0.0;   // vacuum mixing angle, radians
    double kappa = 0.0;   // diagonal non-Hermitian strength, GeV^2
    double sigma = 0.0;   // off-diagonal non-Hermitian strength, GeV^2
    double phi = 0.0;     // diagonal phase, radians
    double chi = 0.0;     // off-diagonal phase, radians

    bool finite() const {
        return std::isfinite(energy) && std::isfinite(dm2) && std::isfinite(mbar2) &&
               std::isfinite(theta) && std::isfinite(kappa) && std::isfinite(sigma) &&
               std::isfinite(phi) && std::isfinite(chi);
    }

    void validate() const {
        if (!finite()) throw NonFinite("OscillationParams: non-finite field");
        if (energy <= 0.0) throw InvalidParams("OscillationParams: energy must be positive");
    }

    bool pt_symmetric(double tol = 1e-12) const {
        return std::abs(theta - 0.25 * M_PI) <= tol && std::abs(chi) <= tol;
    }
};

enum class RegimeKind { Unbroken, Broken, Exceptional };

inline const char* to_string(RegimeKind k) {
    switch (k) {
        case RegimeKind::Unbroken: return "unbroken";
        case RegimeKind::Broken: return "broken";
        case RegimeKind::Exceptional: return "exceptional";
    }
    return "?";
}

struct Regime {
    RegimeKind kind;
    double discriminant;  // (sigma + dm2)^2 - kappa^2 sin^2(phi), GeV^4
};

/// H = B - iC with B, C Hermitian.
struct HermitianSplit {
    CMat2 B;
    CMat2 C;
};

/// Hermitian vacuum Hamiltonian (kappa = sigma = 0 limit).
inline CMat2 vacuum_hamiltonian(const OscillationParams& p) {
    p.validate();
    const double f = 1.0 / (4.0 * p.energy);
    const double c2 = std::cos(2.0 * p.theta);
    const double s2 = std::sin(2.0 * p.theta);
    return {Complex(f * (p.mbar2 - p.dm2 * c2)), Complex(f * p.dm2 * s2),
            Complex(f * p.dm2 * s2), Complex(f * (p.mbar2 + p.dm2 * c2))};
}

/// Vacuum Hamiltonian augmented by the non-Hermitian block
/// (1/4E) [[kappa e^{i phi}, sigma e^{i chi}], [sigma e^{-i chi}, kappa e^{-i phi}]].
inline CMat2 build_hamiltonian(const OscillationParams& p) {
    p.validate();
    const double f = 1.0 / (4.0 * p.energy);
    CMat2 h = vacuum_hamiltonian(p);
    h.a += f * p.kappa * std::polar(1.0, p.phi);
    h.b += f * p.sigma * std::polar(1.0, p.chi);
    h.c += f * p.sigma * std::polar(1.0, -p.chi);
    h.d += f * p.kappa * std::polar(1.0, -p.phi);
    return h;
}

inline HermitianSplit hermitian_split(const CMat2& h) {
    if (!h.finite()) throw NonFinite("hermitian_split: non-finite input");
    const CMat2 hd = h.adjoint();
    return {0.5 * (h + hd), (0.5 * kImagUnit) * (h - hd)};
}

/// Closed-form eigenvalues
///   E_pm = (1/4E)(kappa cos(phi) + mbar2
///                 +- sqrt((sigma + dm2 sin2theta)^2 + (-i kappa sin(phi) + dm2 cos2theta)^2)).
/// The expression is exact only for chi = 0; other chi values are rejected and
/// callers must use eig2(build_hamiltonian(p)) instead.
inline std::pair<Complex, Complex> eigenvalues_general(const OscillationParams& p) {
    p.validate();
    if (p.chi != 0.0) throw UnsupportedChi("eigenvalues_general: closed form requires chi = 0");
    const double f = 1.0 / (4.0 * p.energy);
    const Complex s_term = p.sigma + p.dm2 * std::sin(2.0 * p.theta);
    const Complex d_term = -kImagUnit * p.kappa * std::sin(p.phi) + p.dm2 * std::cos(2.0 * p.theta);
    const Complex root = std::sqrt(s_term * s_term + d_term * d_term);
    const Complex base = p.kappa * std::cos(p.phi) + p.mbar2;
    return {f * (base + root), f * (base - root)};
}

/// Three-way PT-regime classification from the sign of
/// (sigma + dm2)^2 - kappa^2 sin^2(phi), with an Exceptional band of relative
/// width tol around zero. Defined only on the PT-symmetric subspace.
inline Regime classify_regime(const OscillationParams& p, double tol = 1e-9) {
    p.validate();
    if (!p.pt_symmetric())
        throw NotPTSymmetric("classify_regime: requires theta = pi/4 and chi = 0");
    const double a = (p.sigma + p.dm2) * (p.sigma + p.dm2);
    const double b = p.kappa * std::sin(p.phi) * p.kappa * std::sin(p.phi);
    const double disc = a - b;
    const double scale = a + b;
    if (disc > tol * scale) return {RegimeKind::Unbroken, disc};
    if (disc < -tol * scale) return {RegimeKind::Broken, disc};
    return {RegimeKind::Exceptional, disc};
}

/// The two (P, T) choices under which the theta = pi/4, chi = 0 Hamiltonian is
/// PT-symmetric: P = sigma_x with T = K, and P = sigma_z with T = i sigma_y K.
/// Both products have the same linear part sigma_x; they differ in how T
/// squares (T even vs T odd).
enum class PTChoice { SigmaX_K, SigmaZ_iSigmaYK };

/// Frobenius norm of H (PT) - (PT) H, where PT acts as A K with K complex
/// conjugation, i.e. the residual matrix H A - A conj(H). Zero (up to
/// rounding) iff H commutes with the antilinear PT operator.
inline double pt_commutator_check(const OscillationParams& p, PTChoice choice) {
    const CMat2 h = build_hamiltonian(p);
    const CMat2 sigma_x{0.0, 1.0, 1.0, 0.0};
    const CMat2 sigma_y{0.0, -kImagUnit, kImagUnit, 0.0};
    const CMat2 sigma_z{1.0, 0.0, 0.0, -1.0};
    const CMat2 pt_linear = choice == PTChoice::SigmaX_K
                                ? sigma_x * CMat2::identity()
                                : sigma_z * (kImagUnit * sigma_y);
    const CMat2 h_conj{std::conj(h.a), std::conj(h.b), std::conj(h.c), std::conj(h.d)};
    return (h * pt_linear - pt_linear * h_conj).frobenius_norm();
}

}  // namespace nhosc
