// nhosc: two-flavor oscillation probabilities under non-Hermitian 2x2
// Hamiltonians. Subcommands: phase-map, probability, validate.
// Exit codes: 0 success, 1 validation failure, 2 usage error.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nhosc/scan.hpp"

namespace {

using nhosc::RunConfig;

struct AngleInputs {
    std::string theta, phi, chi, tau, tau_p, alpha, beta;
};

// --config is applied before the regular options so the command line wins.
void preload_config(int argc, char** argv, RunConfig& cfg) {
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        std::string path;
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
        else continue;
        std::ifstream in(path);
        if (!in) throw nhosc::InvalidParams("cannot open config file '" + path + "'");
        nlohmann::json j;
        in >> j;
        nhosc::apply_config_json(cfg, j);
        return;
    }
}

void add_param_options(CLI::App* cmd, RunConfig& cfg, AngleInputs& ang) {
    cmd->add_option("--dm2", cfg.dm2_ev2, "mass-squared splitting [eV^2]");
    cmd->add_option("--kappa", cfg.kappa_ev2, "diagonal non-Hermitian strength [eV^2]");
    cmd->add_option("--sigma", cfg.sigma_ev2, "off-diagonal non-Hermitian strength [eV^2]");
    cmd->add_option("--mbar2", cfg.mbar2_ev2, "mass-squared sum [eV^2] (global phase only)");
    cmd->add_option("--theta", ang.theta, "mixing angle (radians or pi fraction)");
    cmd->add_option("--phi", ang.phi, "diagonal phase (radians or pi fraction)");
    cmd->add_option("--chi", ang.chi, "off-diagonal phase (radians or pi fraction)");
    cmd->add_option("--energy,-E", cfg.energy_gev, "neutrino energy [GeV]");
    cmd->add_option("--tau", ang.tau, "unbroken-frame tau; solves kappa through phi");
    cmd->add_option("--tau-p", ang.tau_p, "broken-frame tau'; solves kappa through phi");
    cmd->add_option("--alpha", ang.alpha, "closed-form alpha (density methods)");
    cmd->add_option("--beta", ang.beta, "closed-form beta (density methods)");
}

void apply_angles(RunConfig& cfg, const AngleInputs& ang) {
    if (!ang.theta.empty()) cfg.theta = nhosc::parse_angle(ang.theta);
    if (!ang.phi.empty()) cfg.phi = nhosc::parse_angle(ang.phi);
    if (!ang.chi.empty()) cfg.chi = nhosc::parse_angle(ang.chi);
    if (!ang.tau.empty()) cfg.tau = nhosc::parse_angle(ang.tau);
    if (!ang.tau_p.empty()) cfg.tau_p = nhosc::parse_angle(ang.tau_p);
    if (!ang.alpha.empty()) cfg.alpha = nhosc::parse_angle(ang.alpha);
    if (!ang.beta.empty()) cfg.beta = nhosc::parse_angle(ang.beta);
}

int with_output(const RunConfig& cfg, const std::function<void(std::ostream&)>& writer) {
    if (cfg.out_path.empty()) {
        writer(std::cout);
        return 0;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << cfg.out_path << "'\n";
        return 2;
    }
    writer(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        preload_config(argc, argv, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"two-flavor oscillation probabilities under non-Hermitian Hamiltonians"};
    app.require_subcommand(1);
    std::string config_path;  // consumed by preload_config; declared so CLI11 accepts it

    AngleInputs ang;
    std::string method_name, units_name, format_name, scan_name, range_text;
    std::string kappa_range_text, sigma_range_text;

    CLI::App* phase = app.add_subcommand("phase-map", "regime grid over the kappa-sigma plane");
    phase->add_option("--config", config_path, "JSON config file (flags win)");
    phase->add_option("--dm2", cfg.dm2_ev2, "mass-squared splitting [eV^2]");
    phase->add_option("--phi", ang.phi, "diagonal phase (radians or pi fraction)");
    phase->add_option("--energy,-E", cfg.energy_gev, "neutrino energy [GeV]");
    phase->add_option("--kappa-range", kappa_range_text, "kappa axis as lo:hi [eV^2]");
    phase->add_option("--sigma-range", sigma_range_text, "sigma axis as lo:hi [eV^2]");
    phase->add_option("--samples", cfg.samples, "grid resolution per axis");
    phase->add_option("--out", cfg.out_path, "output file (default stdout)");
    phase->add_option("--format", format_name, "csv|json");

    CLI::App* prob = app.add_subcommand("probability", "probability sweep over L or L/E");
    prob->add_option("--config", config_path, "JSON config file (flags win)");
    prob->add_option("--method", method_name,
                     "g-metric|density-analytic|density-trace|density-rk4");
    prob->add_option("--scan", scan_name, "L (km) or LE (km/GeV)");
    prob->add_option("--range", range_text, "scan range as lo:hi");
    prob->add_option("--samples", cfg.samples, "number of rows");
    add_param_options(prob, cfg, ang);
    prob->add_flag("--static-g", cfg.static_g, "broken regime: freeze the metric at t = 0");
    prob->add_flag("--vary-energy", cfg.vary_energy, "L/E scan: fix baseline, vary E");
    prob->add_option("--baseline", cfg.baseline_km, "baseline [km] for --vary-energy");
    prob->add_option("--units-mode", units_name, "paper|exact phase constants");
    prob->add_option("--out", cfg.out_path, "output file (default stdout)");
    prob->add_option("--format", format_name, "csv|json");

    CLI::App* validate = app.add_subcommand("validate", "cross-validate every evaluation path");
    validate->add_option("--config", config_path, "JSON config file (flags win)");
    validate->add_option("--points", cfg.validation_points, "random parameter draws");
    validate->add_option("--seed", cfg.seed, "RNG seed for the grid");
    validate->add_option("--inject-fault", cfg.inject_fault,
                         "perturb one closed-form channel (harness self-test)");
    validate->add_option("--steps-per-period", cfg.steps_per_period, "RK4 resolution");
    validate->add_option("--out", cfg.out_path, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!method_name.empty()) cfg.method = nhosc::parse_method(method_name);
        if (!units_name.empty()) cfg.units_mode = nhosc::parse_units_mode(units_name);
        if (!format_name.empty()) cfg.format = nhosc::parse_format(format_name);
        if (!range_text.empty()) cfg.range = nhosc::parse_range(range_text);
        if (!kappa_range_text.empty()) cfg.kappa_range = nhosc::parse_range(kappa_range_text);
        if (!sigma_range_text.empty()) cfg.sigma_range = nhosc::parse_range(sigma_range_text);
        if (!scan_name.empty()) {
            if (scan_name == "L") cfg.variable = nhosc::ScanVariable::L;
            else if (scan_name == "LE") cfg.variable = nhosc::ScanVariable::LOverE;
            else throw nhosc::InvalidParams("unknown scan '" + scan_name + "' (expected L|LE)");
        }
        apply_angles(cfg, ang);

        if (phase->parsed()) {
            cfg.variable = nhosc::ScanVariable::KappaSigma;
            const auto rows = nhosc::run_phase_map(cfg);
            return with_output(cfg, [&](std::ostream& os) {
                if (cfg.format == nhosc::OutputFormat::Csv) nhosc::write_phase_map_csv(rows, os);
                else os << nhosc::phase_map_to_json(rows).dump(2) << '\n';
            });
        }
        if (prob->parsed()) {
            const auto rows = nhosc::run_probability_scan(cfg);
            return with_output(cfg, [&](std::ostream& os) {
                if (cfg.format == nhosc::OutputFormat::Csv) nhosc::write_scan_csv(rows, os);
                else os << nhosc::scan_rows_to_json(rows).dump(2) << '\n';
            });
        }
        // validate
        const nhosc::ValidationReport report = nhosc::run_validation(cfg);
        const nlohmann::json j = report.to_json();
        if (!cfg.out_path.empty()) {
            std::ofstream out(cfg.out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot open output file '" << cfg.out_path << "'\n";
                return 2;
            }
            out << j.dump(2) << '\n';
        }
        for (const auto& [name, stat] : report.pairs)
            std::cout << (stat.pass ? "[PASS] " : "[FAIL] ") << name
                      << " max_abs_dev=" << stat.max_abs_dev << " tol=" << stat.tolerance << "\n";
        if (!report.errors.empty()) {
            std::cout << "[FAIL] " << report.errors.size() << " point(s) raised errors\n";
            for (const auto& e : report.errors) std::cerr << "  " << e << "\n";
        }
        std::cout << (report.pass ? "validation passed" : "validation FAILED") << " ("
                  << report.skips.size() << " recorded skips)\n";
        return report.pass ? 0 : 1;
    } catch (const nhosc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
