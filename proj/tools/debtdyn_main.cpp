#include "debtdyn/scenario_io.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

using namespace debtdyn;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;   // validation / parse problems
constexpr int kExitDomainError = 2;  // arithmetic / domain problems

struct GlobalOptions {
    std::string format = "csv";
    std::string units;        // empty: use the file's units
    std::string convention;   // empty: use the file's convention
    std::string output;       // empty: stdout
    std::optional<int> round_digits;
};

EmitOptions resolve_emit_options(const GlobalOptions& g, const ScenarioBundle& bundle) {
    EmitOptions opt;
    opt.format = g.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    const std::string units = g.units.empty() ? std::string(to_string(bundle.file_units)) : g.units;
    opt.units = units == "percent" ? Units::Percent : Units::Ratio;
    opt.round_digits = g.round_digits;
    return opt;
}

ScenarioBundle load_with_overrides(const std::string& path, const GlobalOptions& g) {
    ScenarioBundle bundle = load_scenario_file(path);
    if (!g.convention.empty()) {
        bundle.convention = g.convention == "ratio" ? PropagationConvention::Ratio
                                                    : PropagationConvention::Additive;
    }
    return bundle;
}

void write_document(const std::string& doc, const GlobalOptions& g) {
    if (g.output.empty()) {
        std::cout << doc;
        return;
    }
    std::ofstream out(g.output, std::ios::binary);
    if (!out) {
        throw ParseError("cannot open output file: " + g.output);
    }
    out << doc;
}

int run(int argc, char** argv) {
    CLI::App app{"Debt-to-GDP dynamics under fiscal-multiplier feedback"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--units", g.units, "Display units (default: the file's units)")
        ->check(CLI::IsMember({"ratio", "percent"}));
    app.add_option("--convention", g.convention,
                   "Propagation convention override (default: the file's)")
        ->check(CLI::IsMember({"additive", "ratio"}));
    app.add_option("--output", g.output, "Write data to a file instead of stdout");
    int round_digits = -1;
    auto* round_opt =
        app.add_option("--round", round_digits, "Round displayed values to N decimals")
            ->check(CLI::Range(0, 17));

    std::string sim_file;
    auto* sim = app.add_subcommand("simulate", "Nominal + perturbed trajectories, both engines");
    sim->add_option("file", sim_file, "Scenario file")->required();

    std::string sens_file;
    std::size_t sens_at = 0;
    auto* sens = app.add_subcommand("sensitivity", "First-order shock coefficient matrix");
    sens->add_option("file", sens_file, "Scenario file")->required();
    auto* sens_at_opt = sens->add_option("--at", sens_at, "Only the given observation period");

    std::string thr_file;
    auto* thr = app.add_subcommand("threshold", "Austerity threshold classification per period");
    thr->add_option("file", thr_file, "Scenario file")->required();

    std::string sweep_file;
    double eta_from = 0.0;
    double eta_to = 0.0;
    std::size_t eta_steps = 0;
    std::size_t sweep_at = 0;
    auto* sweep = app.add_subcommand("sweep", "Evaluate both engines across a grid of eta values");
    sweep->add_option("file", sweep_file, "Scenario file")->required();
    sweep->add_option("--eta-from", eta_from, "First eta")->required();
    sweep->add_option("--eta-to", eta_to, "Last eta")->required();
    sweep->add_option("--eta-steps", eta_steps, "Number of grid points")->required();
    auto* sweep_at_opt = sweep->add_option("--at", sweep_at, "Observation period (default: horizon)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    if (round_opt->count() > 0) {
        g.round_digits = round_digits;
    }

    if (sim->parsed()) {
        const ScenarioBundle bundle = load_with_overrides(sim_file, g);
        const ResultTable table = build_result_table(bundle);
        write_document(emit_results(table, resolve_emit_options(g, bundle)), g);
        return kExitOk;
    }
    if (sens->parsed()) {
        const ScenarioBundle bundle = load_with_overrides(sens_file, g);
        std::optional<std::size_t> at;
        if (sens_at_opt->count() > 0) {
            if (sens_at < 1 || sens_at > bundle.scenario.horizon) {
                throw ValidationError("--at period out of range");
            }
            at = sens_at;
        }
        const SensitivityMatrix matrix =
            sensitivity_matrix(bundle.scenario, bundle.multiplier, bundle.convention);
        write_document(emit_sensitivity(matrix, bundle, at, resolve_emit_options(g, bundle)), g);
        return kExitOk;
    }
    if (thr->parsed()) {
        const ScenarioBundle bundle = load_with_overrides(thr_file, g);
        const ThresholdReport report = threshold_report(bundle.scenario, bundle.multiplier);
        write_document(emit_threshold(report, bundle, resolve_emit_options(g, bundle)), g);
        return kExitOk;
    }
    if (sweep->parsed()) {
        const ScenarioBundle bundle = load_with_overrides(sweep_file, g);
        if (eta_steps < 1) {
            throw ValidationError("--eta-steps must be >= 1");
        }
        std::vector<double> etas(eta_steps);
        for (std::size_t i = 0; i < eta_steps; ++i) {
            etas[i] = eta_steps == 1
                          ? eta_from
                          : eta_from + (eta_to - eta_from) *
                                           (static_cast<double>(i) /
                                            static_cast<double>(eta_steps - 1));
        }
        const std::size_t obs =
            sweep_at_opt->count() > 0 ? sweep_at : bundle.scenario.horizon;
        if (obs < 1 || obs > bundle.scenario.horizon) {
            throw ValidationError("--at period out of range");
        }
        const auto records = eta_sweep(bundle.scenario, bundle.perturbations, etas,
                                       bundle.convention, obs);
        write_document(emit_sweep(records, bundle, obs, resolve_emit_options(g, bundle)), g);
        return kExitOk;
    }
    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const EngineDomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
}
