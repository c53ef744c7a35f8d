#pragma once

// Density-matrix prescription for general non-Hermitian H = B - iC:
// the nonlinear trace-preserving master equation
//   d rho/dt = -i[B, rho] - {C, rho} + 2 Tr(rho C) rho,
// its normalized analytic solution rho(t) = U rho0 U^dag / Tr(...), trace
// probabilities, and the closed-form channel probabilities parameterized by
// z = alpha + i beta with tanh z = D/R, sech z = S/R,
//   S = sigma + dm2 sin 2theta,  D = -i kappa sin phi + dm2 cos 2theta,
//   R = sqrt(S^2 + D^2),  Gamma = R/4E = gamma + i xi.

#include <cmath>
#include <utility>

#include "nhosc/errors.hpp"
#include "nhosc/linalg2.hpp"
#include "nhosc/model.hpp"
#include "nhosc/probability_quad.hpp"
#include "nhosc/units.hpp"

namespace nhosc {

// ---------------------------------------------------------------------------
// States

enum class FlavorLabel { a, b };

/// Hermitian, trace-1, positive-semidefinite 2x2 state.
class DensityMatrix {
  public:
    static DensityMatrix pure(const CVec2& psi) {
        return DensityMatrix(CMat2::outer(psi.normalized(), psi.normalized()));
    }

    /// Validating factory; default tolerances match the type's invariants.
    /// Numerical integrators may pass their own accuracy scale as psd_tol.
    static DensityMatrix from_matrix(const CMat2& m, double psd_tol = 1e-12) {
        if (!m.finite()) throw NonFinite("DensityMatrix: non-finite entries");
        const double scale = std::max(1.0, m.frobenius_norm());
        if ((m - m.adjoint()).frobenius_norm() > 1e-12 * scale)
            throw InvalidParams("DensityMatrix: not Hermitian");
        if (std::abs(m.trace() - Complex(1.0)) > 1e-12)
            throw InvalidParams("DensityMatrix: trace != 1");
        const auto [lo, hi] = eigenvalue_bounds(m);
        (void)hi;
        if (lo < -psd_tol) throw InvalidParams("DensityMatrix: negative eigenvalue");
        return DensityMatrix(m);
    }

    const CMat2& matrix() const { return m_; }

    double purity() const { return (m_ * m_).trace().real(); }

    /// Real eigenvalues (the matrix is Hermitian), ascending.
    static std::pair<double, double> eigenvalue_bounds(const CMat2& m) {
        const double half_tr = 0.5 * m.trace().real();
        const double disc = half_tr * half_tr - m.det().real();
        const double root = std::sqrt(std::max(0.0, disc));
        return {half_tr - root, half_tr + root};
    }

  private:
    explicit DensityMatrix(const CMat2& m) : m_(m) {}
    CMat2 m_;
};

/// Pure-state density matrix of the mass eigenstates of the Hermitian vacuum
/// Hamiltonian: rho_a(0) = [[cos^2, -sc], [-sc, sin^2]], rho_b(0) mirrored.
inline DensityMatrix initial_density(double theta, FlavorLabel k) {
    if (!std::isfinite(theta)) throw NonFinite("initial_density: non-finite theta");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const CVec2 psi = k == FlavorLabel::a ? CVec2{Complex(-c), Complex(s)}
                                          : CVec2{Complex(s), Complex(c)};
    return DensityMatrix::pure(psi);
}

// ---------------------------------------------------------------------------
// Master equation

/// Right-hand side of the flow on raw matrices (used by integrators, whose
/// intermediate stages are not exact density matrices).
inline CMat2 density_flow_rhs(const CMat2& b, const CMat2& c, const CMat2& rho) {
    const CMat2 commutator = b * rho - rho * b;
    const CMat2 anticommutator = c * rho + rho * c;
    const Complex gain = 2.0 * (rho * c).trace();
    return (-kImagUnit) * commutator - anticommutator + gain * rho;
}

/// -i[B, rho] - {C, rho} + 2 Tr(rho C) rho. Traceless for any input.
inline CMat2 rhs_density(const HermitianSplit& split, const DensityMatrix& rho) {
    return density_flow_rhs(split.B, split.C, rho.matrix());
}

/// Normalized analytic solution rho(t) = U rho0 U^dag / Tr(U rho0 U^dag) with
/// U = exp(-iHt). Evaluated through the growth-factored evolution operator, so
/// the ratio stays finite however long the broken-regime time.
inline DensityMatrix evolve_density_analytic(const CMat2& h, const DensityMatrix& rho0, double t) {
    const CMat2 u = evolution_operator_scaled(h, t);
    const CMat2 numerator = u * rho0.matrix() * u.adjoint();
    const double tr = numerator.trace().real();
    if (!(tr > 1e-300))
        throw VanishingNorm("evolve_density_analytic: numerator trace underflow");
    CMat2 rho = (1.0 / tr) * numerator;
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix::from_matrix(rho);
}

inline DensityMatrix evolve_density_analytic(const OscillationParams& p, const DensityMatrix& rho0,
                                             double t) {
    return evolve_density_analytic(build_hamiltonian(p), rho0, t);
}

/// P = Tr(rho_target(0) rho_evolved); in [0, 1] for a pure target.
inline double probability_trace(const DensityMatrix& rho_target0, const DensityMatrix& rho_evolved) {
    return (rho_target0.matrix() * rho_evolved.matrix()).trace().real();
}

/// All four channels through the trace pipeline with caller-chosen initial states.
inline ProbabilityQuad probabilities_trace_pipeline(const CMat2& h, const DensityMatrix& rho_a0,
                                                    const DensityMatrix& rho_b0, double t) {
    const DensityMatrix rho_a = evolve_density_analytic(h, rho_a0, t);
    const DensityMatrix rho_b = evolve_density_analytic(h, rho_b0, t);
    ProbabilityQuad q;
    q.p_aa = probability_trace(rho_a0, rho_a);
    q.p_ab = probability_trace(rho_b0, rho_a);
    q.p_ba = probability_trace(rho_a0, rho_b);
    q.p_bb = probability_trace(rho_b0, rho_b);
    return q;
}

/// Trace pipeline with the prescription's own initial states. Valid for any
/// chi, any theta, any regime.
inline ProbabilityQuad probabilities_trace(const OscillationParams& p, double t) {
    return probabilities_trace_pipeline(build_hamiltonian(p),
                                        initial_density(p.theta, FlavorLabel::a),
                                        initial_density(p.theta, FlavorLabel::b), t);
}

// ---------------------------------------------------------------------------
// Closed-form parameterization

struct ClosedFormParams {
    Complex z;       // alpha + i beta
    double alpha;
    double beta;     // radians, |beta| <= pi
    Complex Gamma;   // R/4E = gamma + i xi, GeV
    double gamma_r;  // oscillation rate, GeV
    double xi;       // growth rate, GeV
};

/// Branch-fixed z from (D, S): principal arctanh(D/R), then shifted by i*pi if
/// needed so that sech(z) * R = +S rather than -S. The pair of conditions pins
/// z modulo 2*pi*i, under which every downstream expression is invariant.
inline ClosedFormParams closed_form_params_from(Complex d_term, double s_term, double energy) {
    if (!is_finite(d_term) || !std::isfinite(s_term) || !std::isfinite(energy))
        throw NonFinite("closed_form_params_from: non-finite input");
    if (std::abs(s_term) < 1e-300)
        throw DegenerateSech("closed_form_params_from: sigma + dm2 sin 2theta = 0");
    const Complex r2 = Complex(s_term * s_term) + d_term * d_term;
    // R = 0 is the exceptional point; the band matches tol_defect of eig2.
    const double scale2 = s_term * s_term + std::norm(d_term);
    if (std::abs(r2) <= 1e-9 * scale2)
        throw WrongRegime("closed_form_params_from: R = 0 (exceptional point), z undefined");
    const Complex r = std::sqrt(r2);

    Complex z = std::atanh(d_term / r);
    const Complex target = r / s_term;  // required cosh z
    if (std::abs(std::cosh(z) - target) > std::abs(std::cosh(z) + target))
        z += (z.imag() <= 0.0 ? kImagUnit : -kImagUnit) * M_PI;

    ClosedFormParams out;
    out.z = z;
    out.alpha = z.real();
    out.beta = z.imag();
    out.Gamma = r / (4.0 * energy);
    out.gamma_r = out.Gamma.real();
    out.xi = out.Gamma.imag();
    return out;
}

inline ClosedFormParams closed_form_params(const OscillationParams& p) {
    p.validate();
    if (p.chi != 0.0) throw UnsupportedChi("closed_form_params: requires chi = 0");
    const double s_term = p.sigma + p.dm2 * std::sin(2.0 * p.theta);
    const Complex d_term =
        -kImagUnit * (p.kappa * std::sin(p.phi)) + p.dm2 * std::cos(2.0 * p.theta);
    return closed_form_params_from(d_term, s_term, p.energy);
}

// ---------------------------------------------------------------------------
// Closed-form probabilities

namespace detail {

// cos/sin/cosh/sinh of the two phase arguments, all damped by exp(-|x_xi|) so
// the num/den ratios are exact while every intermediate stays O(1).
struct DampedPhases {
    double ct, st, cht, sht;
};

inline DampedPhases damped_phases(double x_gamma, double x_xi) {
    const double damp = std::exp(-std::abs(x_xi));
    DampedPhases d;
    d.ct = std::cos(x_gamma) * damp;
    d.st = std::sin(x_gamma) * damp;
    d.cht = 0.5 * (1.0 + damp * damp);
    d.sht = (x_xi >= 0.0 ? 0.5 : -0.5) * (1.0 - damp * damp);
    return d;
}

}  // namespace detail

/// The four bracketed channel expressions in terms of (theta, alpha, beta) and
/// the doubled phases x_gamma = 2 gamma t, x_xi = 2 xi t. Conserves
/// P_aa + P_ab = 1 and P_ba + P_bb = 1 identically.
inline ProbabilityQuad density_quad_general(double theta, double alpha, double beta,
                                            double x_gamma, double x_xi) {
    const auto [ct, st, cht, sht] = detail::damped_phases(x_gamma, x_xi);
    const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
    const double c4 = std::cos(4.0 * theta), s4 = std::sin(4.0 * theta);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double cb2 = std::cos(2.0 * beta), sb2 = std::sin(2.0 * beta);
    const double cha = std::cosh(alpha), sha = std::sinh(alpha);
    const double ch2a = std::cosh(2.0 * alpha), sh2a = std::sinh(2.0 * alpha);

    const double k1 = c4 * (2.0 + cb2 - ch2a) - 4.0 * cb * s4 * sha;
    const double k2 = 2.0 - cb2 + ch2a + k1;
    const double cross = st * sb2 + sht * sh2a;
    const double mix = st * sb * sha - sht * cb * cha;

    const double even = -ct * (2.0 - 3.0 * cb2 - ch2a) + cht * (2.0 + cb2 + 3.0 * ch2a) +
                        (ct - cht) * k1;
    const double den_a = 4.0 * (2.0 * cht * cha * cha - 2.0 * ct * sb * sb - c2 * cross + 2.0 * s2 * mix);
    const double den_b = 4.0 * (2.0 * cht * cha * cha - 2.0 * ct * sb * sb + c2 * cross - 2.0 * s2 * mix);

    ProbabilityQuad q;
    q.p_aa = (even - 4.0 * c2 * cross + 8.0 * s2 * mix) / den_a;
    q.p_ab = (cht - ct) * k2 / den_a;
    q.p_ba = (cht - ct) * k2 / den_b;
    q.p_bb = (even + 4.0 * c2 * cross - 8.0 * s2 * mix) / den_b;
    return q;
}

/// Reduced expressions of the PT-symmetric limit (theta = pi/4, chi = 0).
inline ProbabilityQuad density_quad_pt_limit(double alpha, double beta, double x_gamma,
                                             double x_xi) {
    const auto [ct, st, cht, sht] = detail::damped_phases(x_gamma, x_xi);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double cb2 = std::cos(2.0 * beta);
    const double cha = std::cosh(alpha), sha = std::sinh(alpha);
    const double ch2a = std::cosh(2.0 * alpha);

    const double mix = st * sb * sha - sht * cb * cha;
    const double even = ct * (-2.0 + cb2 + ch2a) + cht * (2.0 + cb2 + ch2a);
    const double den_a = 4.0 * (cht * cha * cha - ct * sb * sb + mix);
    const double den_b = 4.0 * (cht * cha * cha - ct * sb * sb - mix);

    ProbabilityQuad q;
    q.p_aa = (even + 4.0 * mix) / den_a;
    q.p_ab = (cht - ct) * (ch2a - cb2) / den_a;
    q.p_ba = (cht - ct) * (ch2a - cb2) / den_b;
    q.p_bb = (even - 4.0 * mix) / den_b;
    return q;
}

inline ProbabilityQuad probabilities_closed_form(const OscillationParams& p, double t) {
    const ClosedFormParams c = closed_form_params(p);
    return density_quad_general(p.theta, c.alpha, c.beta, 2.0 * c.gamma_r * t, 2.0 * c.xi * t);
}

inline ProbabilityQuad probabilities_pt_limit(const OscillationParams& p, double t) {
    p.validate();
    if (!p.pt_symmetric())
        throw NotPTSymmetric("probabilities_pt_limit: requires theta = pi/4 and chi = 0");
    const ClosedFormParams c = closed_form_params(p);
    return density_quad_pt_limit(c.alpha, c.beta, 2.0 * c.gamma_r * t, 2.0 * c.xi * t);
}

// ---------------------------------------------------------------------------
// Direct (alpha, beta) parameterization

/// Specifies the closed forms through (alpha, beta) instead of the microscopic
/// (kappa, phi). Not every (alpha, beta, theta) combination is reachable from
/// real (kappa, phi); effective_hamiltonian() realizes the matching dynamics
/// regardless.
struct AlphaBetaParams {
    double alpha = 0.0;
    double beta = 0.0;   // radians
    double theta = 0.0;  // radians
    double dm2 = 0.0;    // GeV^2
    double sigma = 0.0;  // GeV^2
    double energy = 1.0; // GeV
    double mbar2 = 0.0;  // GeV^2

    double s_term() const { return sigma + dm2 * std::sin(2.0 * theta); }

    double gamma_r() const {
        return s_term() * std::cosh(alpha) * std::cos(beta) / (4.0 * energy);
    }
    double xi() const {
        return s_term() * std::sinh(alpha) * std::sin(beta) / (4.0 * energy);
    }
};

/// H = omega I + (1/4E) [[-D, S], [S, D]] with D = S sinh(alpha + i beta).
/// Reproduces the z-parameterization exactly, whether or not real (kappa, phi)
/// exist for it.
inline CMat2 effective_hamiltonian(const AlphaBetaParams& q) {
    if (q.energy <= 0.0) throw InvalidParams("effective_hamiltonian: energy must be positive");
    const double s = q.s_term();
    if (std::abs(s) < 1e-300)
        throw DegenerateSech("effective_hamiltonian: sigma + dm2 sin 2theta = 0");
    const Complex d = s * std::sinh(Complex(q.alpha, q.beta));
    const double f = 1.0 / (4.0 * q.energy);
    const Complex omega = f * q.mbar2;
    return {omega - f * d, Complex(f * s), Complex(f * s), omega + f * d};
}

inline ProbabilityQuad probabilities_closed_form(const AlphaBetaParams& q, double t) {
    return density_quad_general(q.theta, q.alpha, q.beta, 2.0 * q.gamma_r() * t, 2.0 * q.xi() * t);
}

inline ProbabilityQuad probabilities_trace(const AlphaBetaParams& q, double t) {
    return probabilities_trace_pipeline(effective_hamiltonian(q),
                                        initial_density(q.theta, FlavorLabel::a),
                                        initial_density(q.theta, FlavorLabel::b), t);
}

// ---------------------------------------------------------------------------
// Baseline/energy closed form

/// In PaperRounded mode the rate factor carries sin^2(2 theta) where the
/// natural-unit expressions carry sin(2 theta); the two conventions agree only
/// at theta = pi/4. Exact mode uses the sin(2 theta) rate and the exact phase
/// constant.
inline constexpr bool kRoundedModeRateUsesSinSquared = true;

inline ProbabilityQuad probabilities_closed_form_LE(double alpha, double beta, double theta,
                                                    double dm2_ev2, double sigma_ev2, double l_km,
                                                    double e_gev, UnitsMode mode) {
    const double s2 = std::sin(2.0 * theta);
    const double rate_ev2 =
        sigma_ev2 + dm2_ev2 * (mode == UnitsMode::PaperRounded ? s2 * s2 : s2);
    const double base = 2.0 * osc_phase_factor(mode) * rate_ev2 * l_km / e_gev;
    const double x_gamma = base * std::cosh(alpha) * std::cos(beta);
    const double x_xi = base * std::sinh(alpha) * std::sin(beta);
    return density_quad_general(theta, alpha, beta, x_gamma, x_xi);
}

}  // namespace nhosc
