#pragma once

// Minimal complex 2x2 linear algebra: value types, arithmetic, adjoint/trace/
// inverse, eigendecomposition with defective-case detection, and a closed-form
// evolution operator exp(-iHt) that stays valid at exceptional points.

#include <cmath>
#include <complex>
#include <limits>

#include "nhosc/errors.hpp"

namespace nhosc {

using Complex = std::complex<double>;

inline constexpr Complex kImagUnit{0.0, 1.0};

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// CVec2

struct CVec2 {
    Complex c0{0.0, 0.0};
    Complex c1{0.0, 0.0};

    double norm2() const { return std::norm(c0) + std::norm(c1); }
    double norm() const { return std::sqrt(norm2()); }

    CVec2 normalized() const {
        const double n = norm();
        if (n <= 0.0 || !std::isfinite(n)) throw NonFinite("CVec2::normalized: zero or non-finite norm");
        return {c0 / n, c1 / n};
    }

    bool finite() const { return is_finite(c0) && is_finite(c1); }
};

inline CVec2 operator+(const CVec2& u, const CVec2& v) { return {u.c0 + v.c0, u.c1 + v.c1}; }
inline CVec2 operator-(const CVec2& u, const CVec2& v) { return {u.c0 - v.c0, u.c1 - v.c1}; }
inline CVec2 operator*(Complex s, const CVec2& v) { return {s * v.c0, s * v.c1}; }
inline CVec2 operator*(double s, const CVec2& v) { return {s * v.c0, s * v.c1}; }

/// Dirac inner product <u|v> (antilinear in the first argument).
inline Complex dot(const CVec2& u, const CVec2& v) {
    return std::conj(u.c0) * v.c0 + std::conj(u.c1) * v.c1;
}

// ---------------------------------------------------------------------------
// CMat2, row-major [[a, b], [c, d]]

struct CMat2 {
    Complex a{0.0, 0.0}, b{0.0, 0.0};
    Complex c{0.0, 0.0}, d{0.0, 0.0};

    static CMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static CMat2 zero() { return {}; }

    /// |u><v|
    static CMat2 outer(const CVec2& u, const CVec2& v) {
        return {u.c0 * std::conj(v.c0), u.c0 * std::conj(v.c1),
                u.c1 * std::conj(v.c0), u.c1 * std::conj(v.c1)};
    }

    CMat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
    Complex trace() const { return a + d; }
    Complex det() const { return a * d - b * c; }

    double frobenius_norm() const {
        return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
    }

    bool finite() const { return is_finite(a) && is_finite(b) && is_finite(c) && is_finite(d); }
};

inline CMat2 operator+(const CMat2& x, const CMat2& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}
inline CMat2 operator-(const CMat2& x, const CMat2& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}
inline CMat2 operator*(Complex s, const CMat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
inline CMat2 operator*(double s, const CMat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
inline CMat2 operator*(const CMat2& x, const CMat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}
inline CVec2 operator*(const CMat2& m, const CVec2& v) {
    return {m.a * v.c0 + m.b * v.c1, m.c * v.c0 + m.d * v.c1};
}

inline CMat2 adjoint(const CMat2& m) { return m.adjoint(); }
inline Complex trace(const CMat2& m) { return m.trace(); }

inline CMat2 inverse(const CMat2& m) {
    const Complex det = m.det();
    if (std::abs(det) <= 1e-300) throw Singular("inverse: |det| below 1e-300");
    const Complex inv_det = 1.0 / det;
    return {m.d * inv_det, -m.b * inv_det, -m.c * inv_det, m.a * inv_det};
}

/// <u|M|v>
inline Complex sandwich(const CVec2& u, const CMat2& m, const CVec2& v) {
    return dot(u, m * v);
}

// ---------------------------------------------------------------------------
// Eigendecomposition

struct Eig2 {
    Complex lambda_plus;   // trace/2 + sqrt(disc), principal branch
    Complex lambda_minus;  // trace/2 - sqrt(disc)
    CVec2 v_plus;          // unit Euclidean norm, largest component rotated real >= 0
    CVec2 v_minus;
    bool defective = false;
    Complex discriminant;  // (trace/2)^2 - det, carries squared units of H
};

namespace detail {

// Rotate the global phase so the largest-magnitude component is real and >= 0.
inline CVec2 canonical_phase(const CVec2& v) {
    const Complex lead = std::abs(v.c0) >= std::abs(v.c1) ? v.c0 : v.c1;
    const double mag = std::abs(lead);
    if (mag == 0.0) return v;
    const Complex phase = std::conj(lead) / mag;
    return {phase * v.c0, phase * v.c1};
}

// Null vector of (H - lambda*I) for an eigenvalue lambda; scale sets the
// threshold below which a candidate counts as numerically zero.
inline CVec2 eigenvector_for(const CMat2& h, Complex lambda, double scale) {
    const CVec2 cand1{h.b, lambda - h.a};
    const CVec2 cand2{lambda - h.d, h.c};
    const CVec2& best = cand1.norm2() >= cand2.norm2() ? cand1 : cand2;
    if (best.norm() > 1e-14 * scale) return canonical_phase(best.normalized());
    // H is numerically lambda*I; any direction works. Pick the basis vector
    // closest to the diagonal entry that matches.
    return std::abs(h.a - lambda) <= std::abs(h.d - lambda) ? CVec2{1.0, 0.0} : CVec2{0.0, 1.0};
}

}  // namespace detail

/// Eigenvalues and unit right eigenvectors of H. The defective flag is raised
/// when |disc| < tol_defect * ||H||_F^2 (disc has squared units of H), which
/// covers both true exceptional points and scalar multiples of the identity.
inline Eig2 eig2(const CMat2& h, double tol_defect = 1e-9) {
    if (!h.finite()) throw NonFinite("eig2: non-finite input");
    const Complex half_tr = 0.5 * h.trace();
    const Complex disc = half_tr * half_tr - h.det();
    const Complex delta = std::sqrt(disc);
    const double scale = h.frobenius_norm();

    Eig2 out;
    out.lambda_plus = half_tr + delta;
    out.lambda_minus = half_tr - delta;
    out.discriminant = disc;
    out.defective = std::abs(disc) < tol_defect * scale * scale;

    if (out.defective) {
        // Eigenvectors coalesce (or H ~ lambda*I); report what the matrix gives.
        out.v_plus = detail::eigenvector_for(h, half_tr, scale);
        const CVec2 other = detail::eigenvector_for(h, out.lambda_minus, scale);
        const CMat2 shifted = h - Complex(half_tr) * CMat2::identity();
        out.v_minus = shifted.frobenius_norm() > 1e-14 * scale ? out.v_plus : other;
    } else {
        out.v_plus = detail::eigenvector_for(h, out.lambda_plus, scale);
        out.v_minus = detail::eigenvector_for(h, out.lambda_minus, scale);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evolution operator

namespace detail {

inline Complex sinc(Complex w) {
    if (std::abs(w) < 1e-4) {
        const Complex w2 = w * w;
        return 1.0 - w2 / 6.0 + w2 * w2 / 120.0 - w2 * w2 * w2 / 5040.0;
    }
    return std::sin(w) / w;
}

// cos(w)*exp(-|Im w|) and sin(w)*exp(-|Im w|), computed without overflow for
// arbitrarily large |Im w|.
struct ScaledTrig {
    Complex cos_s, sin_s;
};

inline ScaledTrig scaled_trig(Complex w) {
    const double u = w.real();
    const double v = w.imag();
    const Complex eiu = std::polar(1.0, u);
    const double damp = std::exp(-2.0 * std::abs(v));
    ScaledTrig out;
    if (v >= 0.0) {
        // e^{iw} carries the decay, e^{-iw} the growth.
        out.cos_s = 0.5 * (eiu * damp + std::conj(eiu));
        out.sin_s = (eiu * damp - std::conj(eiu)) / (2.0 * kImagUnit);
    } else {
        out.cos_s = 0.5 * (eiu + std::conj(eiu) * damp);
        out.sin_s = (eiu - std::conj(eiu) * damp) / (2.0 * kImagUnit);
    }
    return out;
}

}  // namespace detail

/// U(t) = exp(-iHt) in closed form:
///   U = e^{-i tr(H) t / 2} [cos(Dt) I - i sinc(Dt) t (H - tr(H)/2 I)],
/// with D^2 = -det(H - tr(H)/2 I). sinc carries the analytic limit sinc(0)=1,
/// so the formula needs no special casing at exceptional points.
inline CMat2 evolution_operator(const CMat2& h, double t) {
    if (!h.finite() || !std::isfinite(t)) throw NonFinite("evolution_operator: non-finite input");
    const Complex half_tr = 0.5 * h.trace();
    const CMat2 traceless = h - half_tr * CMat2::identity();
    const Complex delta = std::sqrt(-traceless.det());
    const Complex w = delta * t;
    const Complex prefactor = std::exp(-kImagUnit * half_tr * t);
    return prefactor * (std::cos(w) * CMat2::identity() -
                        (kImagUnit * t * detail::sinc(w)) * traceless);
}

/// exp(-iHt) with the fastest-growing mode factored out:
/// returns U(t) * exp(-g), g = t*Im(tr H)/2 + |Im(Dt)|, so every entry stays
/// O(1) however large the anti-Hermitian part. Trace-normalized quantities
/// built from the result are unchanged because the scale cancels in ratios.
inline CMat2 evolution_operator_scaled(const CMat2& h, double t) {
    if (!h.finite() || !std::isfinite(t)) throw NonFinite("evolution_operator_scaled: non-finite input");
    const Complex half_tr = 0.5 * h.trace();
    const CMat2 traceless = h - half_tr * CMat2::identity();
    const Complex delta = std::sqrt(-traceless.det());
    const Complex w = delta * t;
    // exp(-i*half_tr*t - t*Im(half_tr)) has unit modulus by construction.
    const Complex unit_prefactor = std::polar(1.0, -half_tr.real() * t);
    if (std::abs(w) < 1e-4) {
        const double damp = std::exp(-std::abs(w.imag()));
        return (unit_prefactor * damp) *
               (std::cos(w) * CMat2::identity() - (kImagUnit * t * detail::sinc(w)) * traceless);
    }
    const detail::ScaledTrig st = detail::scaled_trig(w);
    return unit_prefactor * (st.cos_s * CMat2::identity() - (kImagUnit * t * (st.sin_s / w)) * traceless);
}

}  // namespace nhosc
