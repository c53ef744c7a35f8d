#pragma once

// Bi-orthonormal G-metric framework for the PT-symmetric case (theta = pi/4,
// chi = 0): eigenvector frames, metric operators, generalized transition
// probabilities, and the closed-form channel probabilities in both regimes.
// This framework does NOT conserve probability; that is its point.

#include <cmath>

#include "nhosc/errors.hpp"
#include "nhosc/linalg2.hpp"
#include "nhosc/model.hpp"
#include "nhosc/probability_quad.hpp"
#include "nhosc/units.hpp"

namespace nhosc {

/// PT-unbroken eigenframe. sin(tau) = kappa sin(phi) / (dm2 + sigma).
struct UnbrokenFrame {
    double tau;    // radians
    double zeta;   // oscillation rate, GeV
    double omega;  // global-phase rate (kappa cos(phi) + mbar2)/4E, GeV
    CVec2 u_plus, u_minus;  // right eigenvectors
    CVec2 v_plus, v_minus;  // left eigenvectors
    CMat2 G;                // metric, Hermitian positive-definite
    CMat2 A_inv;            // similarity transformation (columns carry u_pm)
};

/// PT-broken eigenframe. cosh(tau_p) = kappa sin(phi) / (dm2 + sigma) > 1.
struct BrokenFrame {
    double tau_p;   // dimensionless, >= 0
    double zeta_p;  // growth rate, GeV
    double omega;   // GeV
    CVec2 u_plus, u_minus;
    CVec2 v_plus, v_minus;
    CMat2 A_inv;
};

namespace detail {

inline void require_pt(const OscillationParams& p, const char* who) {
    p.validate();
    if (!p.pt_symmetric()) throw NotPTSymmetric(std::string(who) + ": requires theta = pi/4 and chi = 0");
}

// log(cosh x), stable for all x.
inline double log_cosh(double x) {
    return std::abs(x) + std::log1p(std::exp(-2.0 * std::abs(x))) - M_LN2;
}

}  // namespace detail

inline UnbrokenFrame unbroken_frame(const OscillationParams& p) {
    detail::require_pt(p, "unbroken_frame");
    const Regime r = classify_regime(p);
    if (r.kind != RegimeKind::Unbroken)
        throw WrongRegime("unbroken_frame: discriminant not positive");
    const double s = p.dm2 + p.sigma;
    const double k = p.kappa * std::sin(p.phi);
    if (s <= 0.0 && k != 0.0)
        throw InvalidParams("unbroken_frame: tau parameterization needs dm2 + sigma > 0");

    UnbrokenFrame f;
    f.tau = s != 0.0 ? std::asin(k / s) : 0.0;
    f.zeta = std::sqrt(r.discriminant) / (4.0 * p.energy);
    f.omega = (p.kappa * std::cos(p.phi) + p.mbar2) / (4.0 * p.energy);

    const double n = 1.0 / std::sqrt(2.0 * std::cos(f.tau));
    const Complex eph = std::polar(1.0, 0.5 * f.tau);   // e^{i tau/2}
    const Complex emh = std::conj(eph);                 // e^{-i tau/2}
    f.u_plus = {n * eph, n * emh};
    f.u_minus = {n * emh, -n * eph};
    f.v_plus = {n * emh, n * eph};
    f.v_minus = {n * eph, -n * emh};
    const double sec = 1.0 / std::cos(f.tau);
    const double tan = std::tan(f.tau);
    f.G = {Complex(sec), -kImagUnit * tan, kImagUnit * tan, Complex(sec)};
    f.A_inv = {n * eph, n * emh, n * emh, -n * eph};
    return f;
}

inline BrokenFrame broken_frame(const OscillationParams& p) {
    detail::require_pt(p, "broken_frame");
    const Regime r = classify_regime(p);
    if (r.kind != RegimeKind::Broken)
        throw WrongRegime("broken_frame: discriminant not negative");
    const double s = p.dm2 + p.sigma;
    const double k = p.kappa * std::sin(p.phi);
    const double ratio = k / s;
    if (!(ratio > 1.0))
        throw WrongRegime("broken_frame: cosh(tau') parameterization needs kappa sin(phi)/(dm2 + sigma) > 1");

    BrokenFrame f;
    f.tau_p = std::acosh(ratio);
    f.zeta_p = std::sqrt(-r.discriminant) / (4.0 * p.energy);
    f.omega = (p.kappa * std::cos(p.phi) + p.mbar2) / (4.0 * p.energy);

    const double n = 1.0 / std::sqrt(2.0 * std::sinh(f.tau_p));
    const double ep = std::exp(0.5 * f.tau_p);
    const double em = std::exp(-0.5 * f.tau_p);
    f.u_plus = {Complex(n * ep), -kImagUnit * (n * em)};
    f.u_minus = {kImagUnit * (n * em), Complex(n * ep)};
    f.v_plus = {Complex(n * ep), kImagUnit * (n * em)};
    f.v_minus = {-kImagUnit * (n * em), Complex(n * ep)};
    f.A_inv = {Complex(n * ep), kImagUnit * (n * em), -kImagUnit * (n * em), Complex(n * ep)};
    return f;
}

/// Time-dependent metric in the broken regime,
///   G_t = (1/sinh tau') [[cosh(tau' - 2 zeta' t), -i cosh 2 zeta' t],
///                        [i cosh 2 zeta' t,        cosh(tau' + 2 zeta' t)]].
inline CMat2 g_metric_time_dependent(const BrokenFrame& f, double t) {
    const double x = 2.0 * f.zeta_p * t;
    const double inv = 1.0 / std::sinh(f.tau_p);
    return {Complex(inv * std::cosh(f.tau_p - x)), -kImagUnit * (inv * std::cosh(x)),
            kImagUnit * (inv * std::cosh(x)), Complex(inv * std::cosh(f.tau_p + x))};
}

/// Static metric option for the broken regime (G_t frozen at t = 0).
inline CMat2 g_metric_static(const BrokenFrame& f) { return g_metric_time_dependent(f, 0.0); }

/// G_t * exp(-2 zeta' |t|), entrywise bounded for any t. Generalized
/// probabilities are invariant under a positive rescaling of the metric, so
/// this is a drop-in for probability_g at times where G_t itself overflows.
inline CMat2 g_metric_time_dependent_scaled(const BrokenFrame& f, double t) {
    const double x = 2.0 * f.zeta_p * std::abs(t);
    const double sgn = t >= 0.0 ? 1.0 : -1.0;
    const double inv = 1.0 / std::sinh(f.tau_p);
    const auto cosh_damped = [x](double y) {  // cosh(y) * exp(-x) for x >= |y| region-safe
        return 0.5 * (std::exp(y - x) + std::exp(-y - x));
    };
    return {Complex(inv * cosh_damped(f.tau_p - sgn * x)), -kImagUnit * (inv * cosh_damped(x)),
            kImagUnit * (inv * cosh_damped(x)), Complex(inv * cosh_damped(f.tau_p + sgn * x))};
}

/// Generalized transition probability
///   |<phi|G|psi>|^2 / (<phi|G|phi> <psi|G|psi>).
inline double probability_g(const CVec2& psi, const CVec2& phi_state, const CMat2& g) {
    const double n_phi = sandwich(phi_state, g, phi_state).real();
    const double n_psi = sandwich(psi, g, psi).real();
    if (n_phi <= 1e-300 || n_psi <= 1e-300)
        throw DegenerateNorm("probability_g: G-norm underflow");
    return std::norm(sandwich(phi_state, g, psi)) / (n_phi * n_psi);
}

namespace detail {

inline ProbabilityQuad unbroken_quad(double tau, double x) {
    const double c = std::cos(x);
    ProbabilityQuad q;
    q.p_aa = c * c;
    q.p_bb = c * c;
    const double sab = std::sin(tau - x);
    const double sba = std::sin(tau + x);
    q.p_ab = sab * sab;
    q.p_ba = sba * sba;
    return q;
}

// cosh-ratio expressions evaluated in log space so arbitrarily large zeta' t
// cannot overflow.
inline ProbabilityQuad broken_quad(double tau_p, double x) {
    const double lc_tau = log_cosh(tau_p);
    const double lc_plus = log_cosh(tau_p + 2.0 * x);
    const double lc_minus = log_cosh(tau_p - 2.0 * x);
    ProbabilityQuad q;
    q.p_aa = std::exp(2.0 * log_cosh(tau_p - x) - lc_tau - lc_minus);
    q.p_ab = std::exp(2.0 * log_cosh(x) - lc_tau - lc_plus);
    q.p_ba = std::exp(2.0 * log_cosh(x) - lc_tau - lc_minus);
    q.p_bb = std::exp(2.0 * log_cosh(tau_p + x) - lc_tau - lc_plus);
    return q;
}

}  // namespace detail

/// P_aa = P_bb = cos^2(zeta t), P_ab = sin^2(tau - zeta t), P_ba = sin^2(tau + zeta t).
inline ProbabilityQuad probabilities_unbroken(const OscillationParams& p, double t) {
    const UnbrokenFrame f = unbroken_frame(p);
    return detail::unbroken_quad(f.tau, f.zeta * t);
}

/// Cosh-ratio probabilities of the broken regime with the time-dependent metric.
inline ProbabilityQuad probabilities_broken(const OscillationParams& p, double t) {
    const BrokenFrame f = broken_frame(p);
    return detail::broken_quad(f.tau_p, f.zeta_p * t);
}

/// Broken-regime probabilities with the metric frozen at t = 0. No closed form
/// in the source material; evaluated through the generalized-probability
/// pipeline.
inline ProbabilityQuad probabilities_broken_static_g(const OscillationParams& p, double t) {
    const BrokenFrame f = broken_frame(p);
    const CMat2 g0 = g_metric_static(f);
    const CMat2 u = evolution_operator_scaled(build_hamiltonian(p), t);
    const CVec2 e_a{1.0, 0.0}, e_b{0.0, 1.0};
    const CVec2 psi_a = u * e_a;
    const CVec2 psi_b = u * e_b;
    ProbabilityQuad q;
    q.p_aa = probability_g(psi_a, e_a, g0);
    q.p_ab = probability_g(psi_a, e_b, g0);
    q.p_ba = probability_g(psi_b, e_a, g0);
    q.p_bb = probability_g(psi_b, e_b, g0);
    return q;
}

/// Unbroken-regime probabilities in baseline/energy form:
///   phase = factor * cos(tau) * (dm2 + sigma)[eV^2] * L[km] / E[GeV],
/// factor = 1.27 (PaperRounded) or 1/(4 hbar c) (Exact).
inline ProbabilityQuad probabilities_unbroken_LE(double dm2_ev2, double sigma_ev2, double tau,
                                                 double l_km, double e_gev, UnitsMode mode) {
    const double phase =
        osc_phase_factor(mode) * std::cos(tau) * (dm2_ev2 + sigma_ev2) * l_km / e_gev;
    return detail::unbroken_quad(tau, phase);
}

/// Broken-regime counterpart: phase = factor * sinh(tau') * (dm2 + sigma) * L/E.
inline ProbabilityQuad probabilities_broken_LE(double dm2_ev2, double sigma_ev2, double tau_p,
                                               double l_km, double e_gev, UnitsMode mode) {
    const double phase =
        osc_phase_factor(mode) * std::sinh(tau_p) * (dm2_ev2 + sigma_ev2) * l_km / e_gev;
    return detail::broken_quad(tau_p, phase);
}

/// kappa that realizes a requested tau at given phi: kappa = (dm2 + sigma) sin(tau)/sin(phi).
inline double kappa_for_tau(double dm2, double sigma, double tau, double phi) {
    const double sp = std::sin(phi);
    if (sp == 0.0) throw InvalidParams("kappa_for_tau: sin(phi) = 0");
    return (dm2 + sigma) * std::sin(tau) / sp;
}

/// kappa that realizes a requested tau': kappa = (dm2 + sigma) cosh(tau')/sin(phi).
inline double kappa_for_tau_p(double dm2, double sigma, double tau_p, double phi) {
    const double sp = std::sin(phi);
    if (sp == 0.0) throw InvalidParams("kappa_for_tau_p: sin(phi) = 0");
    return (dm2 + sigma) * std::cosh(tau_p) / sp;
}

}  // namespace nhosc
