#include "debtdyn/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace debtdyn {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw ParseError(msg); }

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) {
        parse_fail("expected a number for " + where);
    }
    return j.get<double>();
}

std::size_t require_positive_integer(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 1) {
        parse_fail("expected a positive integer for " + where);
    }
    return static_cast<std::size_t>(j.get<long long>());
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            parse_fail("unknown key '" + key + "' in " + where);
        }
    }
}

std::vector<RatePair> parse_rates(const json& j, std::size_t horizon) {
    std::vector<RatePair> rates(horizon);
    if (j.is_object()) {
        // Constant shorthand: {"r": ..., "g_nom": ...}.
        reject_unknown_keys(j, {"r", "g_nom"}, "rates");
        if (!j.contains("r") || !j.contains("g_nom")) {
            parse_fail("rates shorthand requires keys 'r' and 'g_nom'");
        }
        const double r = require_number(j.at("r"), "rates.r");
        const double g = require_number(j.at("g_nom"), "rates.g_nom");
        for (auto& rp : rates) {
            rp = RatePair{r, g};
        }
        return rates;
    }
    if (!j.is_array()) {
        parse_fail("rates must be an object shorthand or an array of {t, r, g_nom}");
    }
    std::vector<bool> seen(horizon, false);
    std::size_t index = 0;
    for (const json& entry : j) {
        const std::string where = "rates[" + std::to_string(index++) + "]";
        if (!entry.is_object()) {
            parse_fail(where + " must be an object {t, r, g_nom}");
        }
        reject_unknown_keys(entry, {"t", "r", "g_nom"}, where);
        if (!entry.contains("t") || !entry.contains("r") || !entry.contains("g_nom")) {
            parse_fail(where + " requires keys 't', 'r' and 'g_nom'");
        }
        const std::size_t t = require_positive_integer(entry.at("t"), where + ".t");
        if (t > horizon) {
            parse_fail(where + ": period " + std::to_string(t) + " exceeds horizon");
        }
        if (seen[t - 1]) {
            parse_fail("duplicate rates entry for t=" + std::to_string(t));
        }
        seen[t - 1] = true;
        rates[t - 1].interest = require_number(entry.at("r"), where + ".r");
        rates[t - 1].growth_nominal = require_number(entry.at("g_nom"), where + ".g_nom");
    }
    for (std::size_t t = 1; t <= horizon; ++t) {
        if (!seen[t - 1]) {
            parse_fail("rates array is missing period t=" + std::to_string(t));
        }
    }
    return rates;
}

std::vector<double> parse_x_nominal(const json& j, std::size_t horizon) {
    std::vector<double> x(horizon);
    if (j.is_number()) {
        x.assign(horizon, j.get<double>());
        return x;
    }
    if (!j.is_array()) {
        parse_fail("x_nom must be a number shorthand or an array of numbers");
    }
    if (j.size() != horizon) {
        parse_fail("x_nom array has " + std::to_string(j.size()) +
                   " entries, horizon is " + std::to_string(horizon));
    }
    for (std::size_t i = 0; i < horizon; ++i) {
        x[i] = require_number(j.at(i), "x_nom[" + std::to_string(i) + "]");
    }
    return x;
}

PerturbationSet parse_perturbations(const json& j) {
    PerturbationSet p;
    if (!j.is_array()) {
        parse_fail("perturbations must be an array of {t, dx}");
    }
    std::size_t index = 0;
    for (const json& entry : j) {
        const std::string where = "perturbations[" + std::to_string(index++) + "]";
        if (!entry.is_object()) {
            parse_fail(where + " must be an object {t, dx}");
        }
        reject_unknown_keys(entry, {"t", "dx"}, where);
        if (!entry.contains("t") || !entry.contains("dx")) {
            parse_fail(where + " requires keys 't' and 'dx'");
        }
        const std::size_t t = require_positive_integer(entry.at("t"), where + ".t");
        p.add(t, require_number(entry.at("dx"), where + ".dx"));
    }
    return p;
}

PropagationConvention parse_convention(const std::string& value) {
    if (value == "additive") {
        return PropagationConvention::Additive;
    }
    if (value == "ratio") {
        return PropagationConvention::Ratio;
    }
    parse_fail("convention must be \"additive\" or \"ratio\", got \"" + value + "\"");
}

Units parse_units(const std::string& value) {
    if (value == "ratio") {
        return Units::Ratio;
    }
    if (value == "percent") {
        return Units::Percent;
    }
    parse_fail("units must be \"ratio\" or \"percent\", got \"" + value + "\"");
}

json scenario_echo(const ScenarioBundle& b) {
    json rates = json::array();
    for (std::size_t t = 1; t <= b.scenario.horizon; ++t) {
        rates.push_back({{"t", t},
                         {"r", b.scenario.rates[t - 1].interest},
                         {"g_nom", b.scenario.rates[t - 1].growth_nominal}});
    }
    json perts = json::array();
    for (const auto& [t, dx] : b.perturbations.entries()) {
        perts.push_back({{"t", t}, {"dx", dx}});
    }
    return json{{"d0", b.scenario.d0},
                {"horizon", b.scenario.horizon},
                {"eta", b.multiplier.eta},
                {"units", "ratio"},
                {"rates", rates},
                {"x_nom", b.scenario.x_nominal},
                {"perturbations", perts},
                {"convention", to_string(b.convention)}};
}

json metadata_object(const ScenarioBundle& b, const EmitOptions& opt) {
    return json{{"tool_version", kToolVersion},
                {"eta", b.multiplier.eta},
                {"convention", to_string(b.convention)},
                {"units", to_string(opt.units)},
                {"scenario", scenario_echo(b)}};
}

// Debt ratios and their deviations convert to display units; dimensionless
// quantities (eta, coefficients) never do.
double display(double ratio_value, Units u) {
    return u == Units::Percent ? ratio_to_percent(ratio_value) : ratio_value;
}

double apply_rounding(double v, std::optional<int> digits) {
    if (!digits) {
        return v;
    }
    const double scale = std::pow(10.0, *digits);
    return std::round(v * scale) / scale;
}

}  // namespace

const char* to_string(Units u) {
    return u == Units::Percent ? "percent" : "ratio";
}

const char* to_string(PropagationConvention conv) {
    return conv == PropagationConvention::Ratio ? "ratio" : "additive";
}

std::string format_double(double v, std::optional<int> round_digits) {
    const double value = apply_rounding(v, round_digits);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

ScenarioBundle parse_scenario_file(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(e.what());
    }
    if (!doc.is_object()) {
        parse_fail("scenario document must be a JSON object");
    }
    reject_unknown_keys(
        doc, {"d0", "horizon", "eta", "units", "rates", "x_nom", "perturbations", "convention"},
        "scenario document");
    for (const char* key : {"units", "d0", "horizon", "eta", "rates", "x_nom"}) {
        if (!doc.contains(key)) {
            parse_fail(std::string("missing required key '") + key + "'");
        }
    }
    if (!doc.at("units").is_string()) {
        parse_fail("units must be a string");
    }

    ScenarioBundle b;
    b.file_units = parse_units(doc.at("units").get<std::string>());
    b.scenario.d0 = require_number(doc.at("d0"), "d0");
    b.scenario.horizon = require_positive_integer(doc.at("horizon"), "horizon");
    b.multiplier.eta = require_number(doc.at("eta"), "eta");
    b.scenario.rates = parse_rates(doc.at("rates"), b.scenario.horizon);
    b.scenario.x_nominal = parse_x_nominal(doc.at("x_nom"), b.scenario.horizon);
    if (doc.contains("perturbations")) {
        b.perturbations = parse_perturbations(doc.at("perturbations"));
    }
    if (doc.contains("convention")) {
        if (!doc.at("convention").is_string()) {
            parse_fail("convention must be a string");
        }
        b.convention = parse_convention(doc.at("convention").get<std::string>());
    }

    if (b.file_units == Units::Percent) {
        b.scenario.d0 = percent_to_ratio(b.scenario.d0);
        for (auto& rp : b.scenario.rates) {
            rp.interest = percent_to_ratio(rp.interest);
            rp.growth_nominal = percent_to_ratio(rp.growth_nominal);
        }
        for (auto& x : b.scenario.x_nominal) {
            x = percent_to_ratio(x);
        }
        PerturbationSet scaled;
        for (const auto& [t, dx] : b.perturbations.entries()) {
            scaled.add(t, percent_to_ratio(dx));
        }
        b.perturbations = std::move(scaled);
    }

    validate_scenario(b.scenario);
    validate_perturbations(b.perturbations, b.scenario.horizon);
    validate_multiplier(b.multiplier);
    return b;
}

ScenarioBundle load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        parse_fail("cannot open scenario file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_scenario_file(buffer.str());
    } catch (const ParseError& e) {
        parse_fail(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

ResultTable build_result_table(const ScenarioBundle& bundle) {
    const Trajectory exact_nominal =
        simulate_exact(bundle.scenario, PerturbationSet{}, bundle.multiplier);
    const Trajectory exact =
        simulate_exact(bundle.scenario, bundle.perturbations, bundle.multiplier);
    const Trajectory linear_nominal = simulate_linear_nominal(bundle.scenario);
    const DeltaTrajectory delta_linear = delta_dynamics(
        bundle.scenario, bundle.perturbations, bundle.multiplier, bundle.convention);

    ResultTable table;
    table.source = bundle;
    table.rows.resize(bundle.scenario.horizon + 1);
    for (std::size_t t = 0; t <= bundle.scenario.horizon; ++t) {
        ResultTable::Row& row = table.rows[t];
        row.t = t;
        row.d_nom = exact_nominal.d[t];
        row.d_exact = exact.d[t];
        row.delta_exact = exact.d[t] - exact_nominal.d[t];
        row.delta_linear = delta_linear.delta_d[t];
        row.d_linear = linear_nominal.d[t] + delta_linear.delta_d[t];
    }
    return table;
}

std::string emit_results(const ResultTable& table, const EmitOptions& opt) {
    if (opt.format == OutputFormat::Csv) {
        std::string out = "t,d_nom,d_exact,d_linear,delta_exact,delta_linear\n";
        for (const auto& row : table.rows) {
            out += std::to_string(row.t);
            for (double v : {row.d_nom, row.d_exact, row.d_linear, row.delta_exact,
                             row.delta_linear}) {
                out += ',';
                out += format_double(display(v, opt.units), opt.round_digits);
            }
            out += '\n';
        }
        return out;
    }
    json rows = json::array();
    for (const auto& row : table.rows) {
        rows.push_back(
            {{"t", row.t},
             {"d_nom", apply_rounding(display(row.d_nom, opt.units), opt.round_digits)},
             {"d_exact", apply_rounding(display(row.d_exact, opt.units), opt.round_digits)},
             {"d_linear", apply_rounding(display(row.d_linear, opt.units), opt.round_digits)},
             {"delta_exact",
              apply_rounding(display(row.delta_exact, opt.units), opt.round_digits)},
             {"delta_linear",
              apply_rounding(display(row.delta_linear, opt.units), opt.round_digits)}});
    }
    json doc{{"metadata", metadata_object(table.source, opt)}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

std::string emit_sensitivity(const SensitivityMatrix& matrix, const ScenarioBundle& bundle,
                             std::optional<std::size_t> obs_period, const EmitOptions& opt) {
    // Coefficients are dimensionless (delta-d per unit delta-x), so no unit
    // conversion applies.
    const std::size_t horizon = matrix.horizon();
    if (opt.format == OutputFormat::Csv) {
        std::string out = "m,T,coeff\n";
        for (std::size_t m = 1; m <= horizon; ++m) {
            for (std::size_t T = m; T <= horizon; ++T) {
                if (obs_period && T != *obs_period) {
                    continue;
                }
                out += std::to_string(m);
                out += ',';
                out += std::to_string(T);
                out += ',';
                out += format_double(matrix.coeff(m, T), opt.round_digits);
                out += '\n';
            }
        }
        return out;
    }
    json rows = json::array();
    for (std::size_t m = 1; m <= horizon; ++m) {
        for (std::size_t T = m; T <= horizon; ++T) {
            if (obs_period && T != *obs_period) {
                continue;
            }
            rows.push_back(
                {{"m", m}, {"T", T}, {"coeff", apply_rounding(matrix.coeff(m, T), opt.round_digits)}});
        }
    }
    json doc{{"metadata", metadata_object(bundle, opt)}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

std::string emit_threshold(const ThresholdReport& report, const ScenarioBundle& bundle,
                           const EmitOptions& opt) {
    // d_nom_prev and break_even are debt ratios and follow the display units;
    // eta*d is dimensionless.
    const std::string break_even_str =
        report.break_even ? format_double(display(*report.break_even, opt.units), opt.round_digits)
                          : std::string();
    if (opt.format == OutputFormat::Csv) {
        std::string out = "t,d_nom_prev,eta_d_nom_prev,classification,break_even\n";
        for (const auto& row : report.rows) {
            out += std::to_string(row.t);
            out += ',';
            out += format_double(display(row.d_nom_prev, opt.units), opt.round_digits);
            out += ',';
            out += format_double(row.eta_d, opt.round_digits);
            out += ',';
            out += to_string(row.classification);
            out += ',';
            out += break_even_str;
            out += '\n';
        }
        return out;
    }
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"t", row.t},
                        {"d_nom_prev",
                         apply_rounding(display(row.d_nom_prev, opt.units), opt.round_digits)},
                        {"eta_d_nom_prev", apply_rounding(row.eta_d, opt.round_digits)},
                        {"classification", to_string(row.classification)}});
    }
    json metadata = metadata_object(bundle, opt);
    metadata["break_even"] =
        report.break_even
            ? json(apply_rounding(display(*report.break_even, opt.units), opt.round_digits))
            : json(nullptr);
    json doc{{"metadata", metadata}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

std::string emit_sweep(const std::vector<EtaSweepRecord>& records, const ScenarioBundle& bundle,
                       std::size_t obs_period, const EmitOptions& opt) {
    if (opt.format == OutputFormat::Csv) {
        std::string out = "eta,delta_linear,delta_exact\n";
        for (const auto& rec : records) {
            out += format_double(rec.eta);
            out += ',';
            out += format_double(display(rec.delta_linear, opt.units), opt.round_digits);
            out += ',';
            out += format_double(display(rec.delta_exact, opt.units), opt.round_digits);
            out += '\n';
        }
        return out;
    }
    json rows = json::array();
    for (const auto& rec : records) {
        rows.push_back(
            {{"eta", rec.eta},
             {"delta_linear", apply_rounding(display(rec.delta_linear, opt.units), opt.round_digits)},
             {"delta_exact", apply_rounding(display(rec.delta_exact, opt.units), opt.round_digits)}});
    }
    json metadata = metadata_object(bundle, opt);
    metadata["observation_period"] = obs_period;
    json doc{{"metadata", metadata}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

}  // namespace debtdyn
