#pragma once

// CLI-facing layer: run configuration with user units (eV^2, km), scan
// drivers for phase maps and probability sweeps, deterministic CSV/JSON
// emission, and the default validation grid.

#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhosc/brodygraefe.hpp"
#include "nhosc/errors.hpp"
#include "nhosc/gmetric.hpp"
#include "nhosc/model.hpp"
#include "nhosc/oracle.hpp"
#include "nhosc/units.hpp"

namespace nhosc {

enum class Method { GMetric, DensityAnalytic, DensityTrace, DensityRk4 };
enum class ScanVariable { L, LOverE, KappaSigma };
enum class OutputFormat { Csv, Json };

struct ScanRange {
    double lo = 0.0;
    double hi = 0.0;

    void validate(const char* name) const {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            throw InvalidParams(std::string(name) + ": range must be finite and ordered");
    }
};

/// Everything a run needs. Mass-squared quantities are in eV^2, baselines in
/// km, energies in GeV, angles in radians; the drivers convert internally.
struct RunConfig {
    Method method = Method::DensityAnalytic;

    double dm2_ev2 = 2.5e-3;
    double kappa_ev2 = 0.0;
    double sigma_ev2 = 0.0;
    double mbar2_ev2 = 0.0;
    double theta = 0.25 * M_PI;
    double phi = M_PI / 6.0;
    double chi = 0.0;
    double energy_gev = 1.0;

    // Derived parameterizations. tau/tau_p solve for kappa through phi;
    // alpha/beta specify the density closed form directly.
    std::optional<double> tau;
    std::optional<double> tau_p;
    std::optional<double> alpha;
    std::optional<double> beta;

    bool static_g = false;      // broken-regime G frozen at t = 0
    bool vary_energy = false;   // L/E scans: fix the baseline, vary E
    double baseline_km = 1000.0;

    ScanVariable variable = ScanVariable::L;
    ScanRange range{0.0, 1000.0};
    int samples = 200;
    ScanRange kappa_range{0.0, 0.02};    // phase-map axes
    ScanRange sigma_range{-0.01, 0.01};

    UnitsMode units_mode = UnitsMode::Exact;
    std::string out_path;  // empty writes to stdout
    OutputFormat format = OutputFormat::Csv;

    // validate subcommand
    int validation_points = 1000;
    std::uint64_t seed = 20250811;
    double inject_fault = 0.0;
    int steps_per_period = 1000;
};

struct ScanRow {
    double x = 0.0;
    ProbabilityQuad quad;
    std::string regime = "n/a";
    std::string error;
};

struct PhaseMapRow {
    double kappa_ev2 = 0.0;
    double sigma_ev2 = 0.0;
    RegimeKind kind = RegimeKind::Unbroken;
    double discriminant_ev4 = 0.0;
};

// ---------------------------------------------------------------------------
// Parsing helpers

/// Angles as decimals or pi fractions: "0.5", "pi", "pi/6", "-2pi/3", "0.5pi".
inline double parse_angle(const std::string& text) {
    if (text.empty()) throw InvalidParams("parse_angle: empty string");
    std::string s = text;
    double sign = 1.0;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        if (s[pos] == '-') sign = -1.0;
        ++pos;
    }
    const std::size_t pi_at = s.find("pi", pos);
    try {
        if (pi_at == std::string::npos) {
            std::size_t used = 0;
            const double value = std::stod(s.substr(pos), &used);
            if (used != s.size() - pos) throw InvalidParams("parse_angle: trailing characters");
            return sign * value;
        }
        double numerator = 1.0;
        if (pi_at > pos) numerator = std::stod(s.substr(pos, pi_at - pos));
        double denominator = 1.0;
        std::size_t rest = pi_at + 2;
        if (rest < s.size()) {
            if (s[rest] != '/') throw InvalidParams("parse_angle: expected '/' after pi");
            std::size_t used = 0;
            denominator = std::stod(s.substr(rest + 1), &used);
            if (used != s.size() - rest - 1 || denominator == 0.0)
                throw InvalidParams("parse_angle: bad denominator");
        }
        return sign * numerator * M_PI / denominator;
    } catch (const std::invalid_argument&) {
        throw InvalidParams("parse_angle: cannot parse '" + text + "'");
    }
}

inline Method parse_method(const std::string& name) {
    if (name == "g-metric") return Method::GMetric;
    if (name == "density-analytic") return Method::DensityAnalytic;
    if (name == "density-trace") return Method::DensityTrace;
    if (name == "density-rk4") return Method::DensityRk4;
    throw InvalidParams("unknown method '" + name + "'");
}

inline UnitsMode parse_units_mode(const std::string& name) {
    if (name == "paper") return UnitsMode::PaperRounded;
    if (name == "exact") return UnitsMode::Exact;
    throw InvalidParams("unknown units mode '" + name + "' (expected paper|exact)");
}

inline OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw InvalidParams("unknown format '" + name + "' (expected csv|json)");
}

inline ScanRange parse_range(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw InvalidParams("range must look like lo:hi, got '" + text + "'");
    try {
        ScanRange r{std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
        r.validate("range");
        return r;
    } catch (const std::invalid_argument&) {
        throw InvalidParams("range must look like lo:hi, got '" + text + "'");
    }
}

/// Flat JSON document mirroring RunConfig. Unknown keys are an error; angles
/// may be numbers or "pi/6"-style strings.
inline void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
    const auto angle = [](const nlohmann::json& v) {
        return v.is_string() ? parse_angle(v.get<std::string>()) : v.get<double>();
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "method") cfg.method = parse_method(value.get<std::string>());
        else if (key == "dm2_ev2") cfg.dm2_ev2 = value.get<double>();
        else if (key == "kappa_ev2") cfg.kappa_ev2 = value.get<double>();
        else if (key == "sigma_ev2") cfg.sigma_ev2 = value.get<double>();
        else if (key == "mbar2_ev2") cfg.mbar2_ev2 = value.get<double>();
        else if (key == "theta") cfg.theta = angle(value);
        else if (key == "phi") cfg.phi = angle(value);
        else if (key == "chi") cfg.chi = angle(value);
        else if (key == "energy_gev") cfg.energy_gev = value.get<double>();
        else if (key == "tau") cfg.tau = angle(value);
        else if (key == "tau_p") cfg.tau_p = angle(value);
        else if (key == "alpha") cfg.alpha = angle(value);
        else if (key == "beta") cfg.beta = angle(value);
        else if (key == "static_g") cfg.static_g = value.get<bool>();
        else if (key == "vary_energy") cfg.vary_energy = value.get<bool>();
        else if (key == "baseline_km") cfg.baseline_km = value.get<double>();
        else if (key == "scan") {
            const std::string v = value.get<std::string>();
            if (v == "L") cfg.variable = ScanVariable::L;
            else if (v == "LE" || v == "L_over_E") cfg.variable = ScanVariable::LOverE;
            else if (v == "kappa-sigma") cfg.variable = ScanVariable::KappaSigma;
            else throw InvalidParams("unknown scan variable '" + v + "'");
        }
        else if (key == "range") cfg.range = ScanRange{value.at(0).get<double>(), value.at(1).get<double>()};
        else if (key == "samples") cfg.samples = value.get<int>();
        else if (key == "kappa_range") cfg.kappa_range = ScanRange{value.at(0).get<double>(), value.at(1).get<double>()};
        else if (key == "sigma_range") cfg.sigma_range = ScanRange{value.at(0).get<double>(), value.at(1).get<double>()};
        else if (key == "units_mode") cfg.units_mode = parse_units_mode(value.get<std::string>());
        else if (key == "out") cfg.out_path = value.get<std::string>();
        else if (key == "format") cfg.format = parse_format(value.get<std::string>());
        else if (key == "validation_points") cfg.validation_points = value.get<int>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "inject_fault") cfg.inject_fault = value.get<double>();
        else if (key == "steps_per_period") cfg.steps_per_period = value.get<int>();
        else throw InvalidParams("unknown config key '" + key + "'");
    }
}

// ---------------------------------------------------------------------------
// Parameter assembly

/// User units -> internal OscillationParams, applying the tau/tau'
/// parameterizations when requested.
inline OscillationParams make_params(const RunConfig& cfg) {
    OscillationParams p;
    p.energy = cfg.energy_gev;
    p.dm2 = ev2_to_gev2(cfg.dm2_ev2);
    p.mbar2 = ev2_to_gev2(cfg.mbar2_ev2);
    p.theta = cfg.theta;
    p.sigma = ev2_to_gev2(cfg.sigma_ev2);
    p.phi = cfg.phi;
    p.chi = cfg.chi;
    if (cfg.tau && cfg.tau_p) throw InvalidParams("specify only one of tau and tau_p");
    if (cfg.tau) {
        p.kappa = kappa_for_tau(p.dm2, p.sigma, *cfg.tau, p.phi);
        p.theta = 0.25 * M_PI;
    } else if (cfg.tau_p) {
        p.kappa = kappa_for_tau_p(p.dm2, p.sigma, *cfg.tau_p, p.phi);
        p.theta = 0.25 * M_PI;
    } else {
        p.kappa = ev2_to_gev2(cfg.kappa_ev2);
    }
    p.validate();
    return p;
}

inline AlphaBetaParams make_alpha_beta_params(const RunConfig& cfg) {
    AlphaBetaParams q;
    q.alpha = cfg.alpha.value_or(0.0);
    q.beta = cfg.beta.value_or(0.0);
    q.theta = cfg.theta;
    q.dm2 = ev2_to_gev2(cfg.dm2_ev2);
    q.sigma = ev2_to_gev2(cfg.sigma_ev2);
    q.energy = cfg.energy_gev;
    q.mbar2 = ev2_to_gev2(cfg.mbar2_ev2);
    return q;
}

// ---------------------------------------------------------------------------
// Scan drivers

namespace detail {

struct ScanPoint {
    double l_km;
    double energy_gev;
};

inline ScanPoint scan_point(const RunConfig& cfg, double x) {
    if (cfg.variable == ScanVariable::L) return {x, cfg.energy_gev};
    if (cfg.vary_energy) {
        if (x <= 0.0) throw InvalidParams("L/E scan with vary_energy needs x > 0");
        return {cfg.baseline_km, cfg.baseline_km / x};
    }
    return {x * cfg.energy_gev, cfg.energy_gev};
}

}  // namespace detail

/// Probability sweep over L (km) or L/E (km/GeV). Rows that fail carry the
/// error message instead of numbers.
inline std::vector<ScanRow> run_probability_scan(const RunConfig& cfg) {
    if (cfg.samples < 2) throw InvalidParams("samples must be >= 2");
    cfg.range.validate("scan range");
    if (cfg.variable == ScanVariable::KappaSigma)
        throw InvalidParams("probability scan needs variable L or L/E");

    const bool use_alpha_beta = cfg.alpha.has_value() || cfg.beta.has_value();
    if (use_alpha_beta && cfg.method == Method::GMetric)
        throw InvalidParams("alpha/beta parameterization applies to density methods only");

    OscillationParams p;
    AlphaBetaParams ab;
    CMat2 h_ab;
    std::string regime = "n/a";
    if (use_alpha_beta) {
        ab = make_alpha_beta_params(cfg);
        h_ab = effective_hamiltonian(ab);
    } else {
        p = make_params(cfg);
        if (p.pt_symmetric()) regime = to_string(classify_regime(p).kind);
        if (cfg.method == Method::GMetric) {
            const Regime r = classify_regime(p);  // throws NotPTSymmetric when unusable
            if (r.kind == RegimeKind::Exceptional)
                throw WrongRegime(
                    "g-metric closed forms are undefined at the exceptional point");
        }
    }

    const IntegrationConfig rk4_cfg{std::max(16, cfg.steps_per_period), true};
    std::vector<ScanRow> rows;
    rows.reserve(cfg.samples);
    for (int i = 0; i < cfg.samples; ++i) {
        ScanRow row;
        row.x = cfg.range.lo + (cfg.range.hi - cfg.range.lo) * i / (cfg.samples - 1);
        row.regime = regime;
        try {
            const detail::ScanPoint pt = detail::scan_point(cfg, row.x);
            const double t = km_to_inverse_gev(pt.l_km, cfg.units_mode);
            if (use_alpha_beta) {
                AlphaBetaParams abx = ab;
                abx.energy = pt.energy_gev;
                const CMat2 h = pt.energy_gev == ab.energy ? h_ab : effective_hamiltonian(abx);
                switch (cfg.method) {
                    case Method::DensityAnalytic:
                        row.quad = probabilities_closed_form(abx, t);
                        break;
                    case Method::DensityTrace:
                        row.quad = probabilities_trace(abx, t);
                        break;
                    case Method::DensityRk4:
                        row.quad = probabilities_rk4(h, abx.theta, t, rk4_cfg);
                        break;
                    case Method::GMetric:
                        break;  // unreachable
                }
            } else {
                OscillationParams px = p;
                px.energy = pt.energy_gev;
                switch (cfg.method) {
                    case Method::GMetric: {
                        const Regime r = classify_regime(px);
                        if (r.kind == RegimeKind::Unbroken)
                            row.quad = probabilities_unbroken(px, t);
                        else if (cfg.static_g)
                            row.quad = probabilities_broken_static_g(px, t);
                        else
                            row.quad = probabilities_broken(px, t);
                        break;
                    }
                    case Method::DensityAnalytic:
                        row.quad = probabilities_closed_form(px, t);
                        break;
                    case Method::DensityTrace:
                        row.quad = probabilities_trace(px, t);
                        break;
                    case Method::DensityRk4:
                        row.quad = probabilities_rk4(px, t, rk4_cfg);
                        break;
                }
            }
        } catch (const Error& e) {
            row.error = e.what();
            row.quad = {std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN()};
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Regime grid over the kappa-sigma plane (eV^2 axes, eV^4 discriminant).
inline std::vector<PhaseMapRow> run_phase_map(const RunConfig& cfg) {
    if (cfg.samples < 2) throw InvalidParams("samples must be >= 2");
    cfg.kappa_range.validate("kappa range");
    cfg.sigma_range.validate("sigma range");

    std::vector<PhaseMapRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.samples) * cfg.samples);
    for (int i = 0; i < cfg.samples; ++i) {
        const double kappa =
            cfg.kappa_range.lo + (cfg.kappa_range.hi - cfg.kappa_range.lo) * i / (cfg.samples - 1);
        for (int j = 0; j < cfg.samples; ++j) {
            const double sigma =
                cfg.sigma_range.lo + (cfg.sigma_range.hi - cfg.sigma_range.lo) * j / (cfg.samples - 1);
            OscillationParams p;
            p.energy = cfg.energy_gev;
            p.dm2 = ev2_to_gev2(cfg.dm2_ev2);
            p.theta = 0.25 * M_PI;
            p.kappa = ev2_to_gev2(kappa);
            p.sigma = ev2_to_gev2(sigma);
            p.phi = cfg.phi;
            const Regime r = classify_regime(p);
            rows.push_back({kappa, sigma, r.kind, r.discriminant * kEV2PerGeV2 * kEV2PerGeV2});
        }
    }
    return rows;
}

/// Deterministic mixed-regime grid for the validation run. Every fifth point
/// carries chi != 0 (trace pipeline only; the closed form records skips).
inline std::vector<OscillationParams> build_validation_grid(std::uint64_t seed, int n_points) {
    if (n_points < 1) throw InvalidParams("validation grid needs at least one point");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    std::vector<OscillationParams> grid;
    grid.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
        OscillationParams p;
        p.energy = uniform(0.5, 4.0);
        p.dm2 = uniform(5e-22, 5e-21);
        p.mbar2 = uniform(0.0, 5e-21);
        p.sigma = uniform(-0.4, 2.0) * p.dm2;
        p.phi = uniform(0.1, M_PI - 0.1) * (uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
        const double s = p.dm2 + p.sigma;
        switch (i % 3) {
            case 0:  // PT-unbroken
                p.theta = 0.25 * M_PI;
                p.kappa = uniform(0.0, 0.95) * s / std::sin(p.phi);
                break;
            case 1:  // PT-broken
                p.theta = 0.25 * M_PI;
                p.kappa = uniform(1.05, 3.0) * s / std::sin(p.phi);
                break;
            default:  // general non-Hermitian
                p.theta = uniform(0.1, 0.5 * M_PI - 0.1);
                p.kappa = uniform(-2.0, 2.0) * s;
                break;
        }
        if (i % 5 == 4) p.chi = uniform(-M_PI, M_PI);
        grid.push_back(p);
    }
    return grid;
}

inline ValidationReport run_validation(const RunConfig& cfg) {
    const std::vector<OscillationParams> grid =
        build_validation_grid(cfg.seed, cfg.validation_points);
    const std::vector<double> t_grid{0.0, 2e20, 8e20, 2e21, 6e21};
    ValidationOptions opt;
    opt.integration.steps_per_period = std::max(16, cfg.steps_per_period);
    opt.inject_fault = cfg.inject_fault;
    return cross_validate(grid, t_grid, opt);
}

// ---------------------------------------------------------------------------
// Emission

namespace detail {

inline std::string num17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// CSV: UTF-8, comma-separated, '.' decimal, header row, 17 significant
/// digits. Byte-identical output for identical configurations.
inline void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& os) {
    os << "x,p_aa,p_ab,p_ba,p_bb,sum_a,sum_b,regime,error\n";
    for (const ScanRow& r : rows) {
        os << detail::num17(r.x) << ',' << detail::num17(r.quad.p_aa) << ','
           << detail::num17(r.quad.p_ab) << ',' << detail::num17(r.quad.p_ba) << ','
           << detail::num17(r.quad.p_bb) << ',' << detail::num17(r.quad.sum_a()) << ','
           << detail::num17(r.quad.sum_b()) << ',' << r.regime << ',' << r.error << '\n';
    }
}

inline void write_phase_map_csv(const std::vector<PhaseMapRow>& rows, std::ostream& os) {
    os << "kappa,sigma,regime,discriminant\n";
    for (const PhaseMapRow& r : rows) {
        os << detail::num17(r.kappa_ev2) << ',' << detail::num17(r.sigma_ev2) << ','
           << to_string(r.kind) << ',' << detail::num17(r.discriminant_ev4) << '\n';
    }
}

inline nlohmann::json scan_rows_to_json(const std::vector<ScanRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ScanRow& r : rows) {
        nlohmann::json row{{"x", r.x},
                           {"p_aa", r.quad.p_aa},
                           {"p_ab", r.quad.p_ab},
                           {"p_ba", r.quad.p_ba},
                           {"p_bb", r.quad.p_bb},
                           {"sum_a", r.quad.sum_a()},
                           {"sum_b", r.quad.sum_b()},
                           {"regime", r.regime}};
        if (!r.error.empty()) row["error"] = r.error;
        arr.push_back(std::move(row));
    }
    return arr;
}

inline nlohmann::json phase_map_to_json(const std::vector<PhaseMapRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PhaseMapRow& r : rows)
        arr.push_back({{"kappa", r.kappa_ev2},
                       {"sigma", r.sigma_ev2},
                       {"regime", to_string(r.kind)},
                       {"discriminant", r.discriminant_ev4}});
    return arr;
}

}  // namespace nhosc
