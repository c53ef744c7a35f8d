#pragma once

// Independent numerical cross-validation: a fixed-step RK4 integrator for the
// nonlinear master equation, and a harness that bounds deviations between
// every pair of evaluation paths (closed forms, trace pipeline, RK4, and the
// G-metric closed-vs-pipeline routes).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhosc/brodygraefe.hpp"
#include "nhosc/errors.hpp"
#include "nhosc/gmetric.hpp"
#include "nhosc/linalg2.hpp"
#include "nhosc/model.hpp"

namespace nhosc {

struct IntegrationConfig {
    int steps_per_period = 2000;   // >= 16
    bool renormalize_each_step = true;

    void validate() const {
        if (steps_per_period < 16)
            throw InvalidParams("IntegrationConfig: steps_per_period must be >= 16");
    }
};

namespace detail {

// Step count from the eigenvalue splitting: one "period" is 2*pi over the
// magnitude of lambda_+ - lambda_-, which covers both oscillation and growth
// rates. Falls back to one period's worth of steps for slow/defective points.
inline std::int64_t rk4_step_count(const CMat2& h, double t_end, const IntegrationConfig& cfg) {
    const Complex half_tr = 0.5 * h.trace();
    const CMat2 traceless = h - half_tr * CMat2::identity();
    const double rate = 2.0 * std::max(std::abs(std::sqrt(-traceless.det())),
                                       traceless.frobenius_norm() / std::sqrt(2.0));
    const double periods = rate * t_end / (2.0 * M_PI);
    const double steps = cfg.steps_per_period * std::max(1.0, std::ceil(periods));
    return static_cast<std::int64_t>(std::min(steps, 5.0e7));
}

}  // namespace detail

/// Classical RK4 over the master-equation right-hand side, fixed step. The
/// flow is trace preserving, so the optional per-step renormalization only
/// removes O(h^5) integrator drift.
inline DensityMatrix integrate_density_rk4(const CMat2& h, const DensityMatrix& rho0, double t_end,
                                           const IntegrationConfig& cfg = {}) {
    cfg.validate();
    if (!std::isfinite(t_end) || t_end < 0.0)
        throw InvalidParams("integrate_density_rk4: t_end must be finite and >= 0");
    if (t_end == 0.0) return rho0;

    const HermitianSplit split = hermitian_split(h);
    const std::int64_t n = detail::rk4_step_count(h, t_end, cfg);
    const double dt = t_end / static_cast<double>(n);

    CMat2 rho = rho0.matrix();
    for (std::int64_t i = 0; i < n; ++i) {
        const CMat2 k1 = density_flow_rhs(split.B, split.C, rho);
        const CMat2 k2 = density_flow_rhs(split.B, split.C, rho + (0.5 * dt) * k1);
        const CMat2 k3 = density_flow_rhs(split.B, split.C, rho + (0.5 * dt) * k2);
        const CMat2 k4 = density_flow_rhs(split.B, split.C, rho + dt * k3);
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (cfg.renormalize_each_step) {
            const double tr = rho.trace().real();
            if (!(tr > 1e-300)) throw NonFinite("integrate_density_rk4: trace collapsed");
            rho = (1.0 / tr) * rho;
        }
        if ((i & 0xff) == 0 && !rho.finite())
            throw NonFinite("integrate_density_rk4: state diverged");
    }
    if (!rho.finite()) throw NonFinite("integrate_density_rk4: state diverged");
    rho = 0.5 * (rho + rho.adjoint());
    const double tr = rho.trace().real();
    rho = (1.0 / tr) * rho;
    // PSD is guaranteed only up to the integrator's global error.
    return DensityMatrix::from_matrix(rho, 1e-8);
}

inline DensityMatrix integrate_density_rk4(const OscillationParams& p, const DensityMatrix& rho0,
                                           double t_end, const IntegrationConfig& cfg = {}) {
    return integrate_density_rk4(build_hamiltonian(p), rho0, t_end, cfg);
}

/// Four-channel probabilities through the RK4 route.
inline ProbabilityQuad probabilities_rk4(const CMat2& h, double theta, double t,
                                         const IntegrationConfig& cfg = {}) {
    const DensityMatrix rho_a0 = initial_density(theta, FlavorLabel::a);
    const DensityMatrix rho_b0 = initial_density(theta, FlavorLabel::b);
    const DensityMatrix rho_a = integrate_density_rk4(h, rho_a0, t, cfg);
    const DensityMatrix rho_b = integrate_density_rk4(h, rho_b0, t, cfg);
    ProbabilityQuad q;
    q.p_aa = probability_trace(rho_a0, rho_a);
    q.p_ab = probability_trace(rho_b0, rho_a);
    q.p_ba = probability_trace(rho_a0, rho_b);
    q.p_bb = probability_trace(rho_b0, rho_b);
    return q;
}

inline ProbabilityQuad probabilities_rk4(const OscillationParams& p, double t,
                                         const IntegrationConfig& cfg = {}) {
    return probabilities_rk4(build_hamiltonian(p), p.theta, t, cfg);
}

// ---------------------------------------------------------------------------
// Cross-validation harness

struct WorstPoint {
    OscillationParams params;
    double t = 0.0;
};

struct MethodPairStat {
    double max_abs_dev = 0.0;
    double tolerance = 0.0;
    WorstPoint worst;
    bool pass = true;

    void record(double dev, const OscillationParams& p, double t) {
        if (dev > max_abs_dev) {
            max_abs_dev = dev;
            worst = {p, t};
        }
        if (dev > tolerance) pass = false;
    }
};

struct ValidationReport {
    std::map<std::string, MethodPairStat> pairs;
    std::vector<std::string> skips;
    std::vector<std::string> errors;
    bool pass = true;

    nlohmann::json to_json() const;
};

struct ValidationOptions {
    IntegrationConfig integration{1000, true};
    /// Perturbation added to one closed-form channel before comparison;
    /// nonzero values exist to prove the harness can fail.
    double inject_fault = 0.0;
    bool run_rk4 = true;
};

namespace detail {

inline nlohmann::json params_to_json(const OscillationParams& p) {
    return {{"energy_GeV", p.energy}, {"dm2_GeV2", p.dm2},   {"mbar2_GeV2", p.mbar2},
            {"theta", p.theta},       {"kappa_GeV2", p.kappa}, {"sigma_GeV2", p.sigma},
            {"phi", p.phi},           {"chi", p.chi}};
}

inline double quad_dev(const ProbabilityQuad& x, const ProbabilityQuad& y) {
    return std::max(std::max(std::abs(x.p_aa - y.p_aa), std::abs(x.p_ab - y.p_ab)),
                    std::max(std::abs(x.p_ba - y.p_ba), std::abs(x.p_bb - y.p_bb)));
}

inline double conservation_dev(const ProbabilityQuad& q) {
    return std::max(std::abs(q.sum_a() - 1.0), std::abs(q.sum_b() - 1.0));
}

inline std::string describe_point(const OscillationParams& p, double t, const char* what) {
    std::ostringstream os;
    os << what << " at kappa=" << p.kappa << " sigma=" << p.sigma << " dm2=" << p.dm2
       << " theta=" << p.theta << " phi=" << p.phi << " chi=" << p.chi << " E=" << p.energy
       << " t=" << t;
    return os.str();
}

}  // namespace detail

inline nlohmann::json ValidationReport::to_json() const {
    nlohmann::json j;
    j["pass"] = pass;
    nlohmann::json jp = nlohmann::json::object();
    for (const auto& [name, stat] : pairs) {
        jp[name] = {{"max_abs_dev", stat.max_abs_dev},
                    {"tolerance", stat.tolerance},
                    {"pass", stat.pass},
                    {"worst_point",
                     {{"params", detail::params_to_json(stat.worst.params)}, {"t_invGeV", stat.worst.t}}}};
    }
    j["pairs"] = jp;
    j["skips"] = skips;
    j["errors"] = errors;
    return j;
}

/// Runs every evaluation path on every (params, t) grid point and records the
/// per-pair maximum deviations against the acceptance tolerances. Per-point
/// errors become recorded failures or skips; the sweep never aborts.
inline ValidationReport cross_validate(const std::vector<OscillationParams>& p_grid,
                                       const std::vector<double>& t_grid,
                                       const ValidationOptions& opt = {}) {
    if (p_grid.empty() || t_grid.empty())
        throw InvalidParams("cross_validate: empty grid");

    ValidationReport report;
    auto& closed_vs_trace = report.pairs["closed_form_vs_trace_pipeline"];
    closed_vs_trace.tolerance = 1e-9;
    auto& rk4_vs_trace = report.pairs["rk4_vs_trace_pipeline"];
    rk4_vs_trace.tolerance = 1e-8;
    auto& rk4_vs_closed = report.pairs["rk4_vs_closed_form"];
    rk4_vs_closed.tolerance = 1e-8;
    auto& cons_trace = report.pairs["conservation_trace_pipeline"];
    cons_trace.tolerance = 1e-10;
    auto& cons_closed = report.pairs["conservation_closed_form"];
    cons_closed.tolerance = 1e-10;
    auto& pt_limit = report.pairs["pt_limit_vs_general_closed_form"];
    pt_limit.tolerance = 1e-12;
    auto& gmetric_pair = report.pairs["gmetric_closed_vs_pipeline"];
    gmetric_pair.tolerance = 1e-11;

    for (const OscillationParams& p : p_grid) {
        for (double t : t_grid) {
            // (ii) trace pipeline: valid everywhere, the reference route.
            ProbabilityQuad trace_q;
            try {
                trace_q = probabilities_trace(p, t);
            } catch (const Error& e) {
                report.errors.push_back(detail::describe_point(p, t, e.what()));
                continue;
            }
            cons_trace.record(detail::conservation_dev(trace_q), p, t);

            // (i) closed forms, chi = 0 only.
            bool have_closed = false;
            ProbabilityQuad closed_q;
            try {
                closed_q = probabilities_closed_form(p, t);
                closed_q.p_ab += opt.inject_fault;
                have_closed = true;
            } catch (const Error& e) {
                report.skips.push_back(detail::describe_point(p, t, e.what()));
            }
            if (have_closed) {
                cons_closed.record(detail::conservation_dev(closed_q), p, t);
                closed_vs_trace.record(detail::quad_dev(closed_q, trace_q), p, t);
                if (p.pt_symmetric()) {
                    try {
                        const ProbabilityQuad lim = probabilities_pt_limit(p, t);
                        pt_limit.record(detail::quad_dev(lim, closed_q), p, t);
                    } catch (const Error& e) {
                        report.skips.push_back(detail::describe_point(p, t, e.what()));
                    }
                }
            }

            // (iii) RK4 oracle.
            if (opt.run_rk4) {
                try {
                    const ProbabilityQuad rk4_q = probabilities_rk4(p, t, opt.integration);
                    rk4_vs_trace.record(detail::quad_dev(rk4_q, trace_q), p, t);
                    if (have_closed) rk4_vs_closed.record(detail::quad_dev(rk4_q, closed_q), p, t);
                } catch (const Error& e) {
                    report.errors.push_back(detail::describe_point(p, t, e.what()));
                }
            }

            // (iv) G-metric closed forms vs the generalized-probability pipeline.
            if (p.pt_symmetric()) {
                try {
                    const Regime r = classify_regime(p);
                    if (r.kind == RegimeKind::Exceptional) {
                        report.skips.push_back(
                            detail::describe_point(p, t, "gmetric closed forms skipped at exceptional point"));
                    } else {
                        const CMat2 h = build_hamiltonian(p);
                        const CMat2 u = evolution_operator_scaled(h, t);
                        const CVec2 e_a{1.0, 0.0}, e_b{0.0, 1.0};
                        const CVec2 psi_a = u * e_a;
                        const CVec2 psi_b = u * e_b;
                        ProbabilityQuad closed_g, pipeline_g;
                        if (r.kind == RegimeKind::Unbroken) {
                            const UnbrokenFrame f = unbroken_frame(p);
                            closed_g = probabilities_unbroken(p, t);
                            pipeline_g.p_aa = probability_g(psi_a, e_a, f.G);
                            pipeline_g.p_ab = probability_g(psi_a, e_b, f.G);
                            pipeline_g.p_ba = probability_g(psi_b, e_a, f.G);
                            pipeline_g.p_bb = probability_g(psi_b, e_b, f.G);
                        } else {
                            const BrokenFrame f = broken_frame(p);
                            if (f.zeta_p * t > 2.5) {
                                // The pipeline route loses ~exp(4 zeta' t) * eps
                                // of accuracy to cancellation; past this point
                                // the comparison says nothing at double precision.
                                report.skips.push_back(detail::describe_point(
                                    p, t, "gmetric pipeline skipped (zeta' t beyond double-precision window)"));
                                continue;
                            }
                            const CMat2 gt = g_metric_time_dependent_scaled(f, t);
                            closed_g = probabilities_broken(p, t);
                            pipeline_g.p_aa = probability_g(psi_a, e_a, gt);
                            pipeline_g.p_ab = probability_g(psi_a, e_b, gt);
                            pipeline_g.p_ba = probability_g(psi_b, e_a, gt);
                            pipeline_g.p_bb = probability_g(psi_b, e_b, gt);
                        }
                        gmetric_pair.record(detail::quad_dev(closed_g, pipeline_g), p, t);
                    }
                } catch (const Error& e) {
                    report.errors.push_back(detail::describe_point(p, t, e.what()));
                }
            }
        }
    }

    report.pass = report.errors.empty();
    for (const auto& [name, stat] : report.pairs) {
        (void)name;
        if (!stat.pass) report.pass = false;
    }
    return report;
}

}  // namespace nhosc
