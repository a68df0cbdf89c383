#pragma once

#include "debtdyn/engine_exact.hpp"
#include "debtdyn/engine_linear.hpp"
#include "debtdyn/sensitivity.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace debtdyn {

inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed scenario document (bad JSON, unknown/missing keys, wrong shapes).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Units { Ratio, Percent };
enum class OutputFormat { Csv, Json };

const char* to_string(Units u);
const char* to_string(PropagationConvention conv);

/// Everything a scenario file describes, normalized to internal ratio units.
struct ScenarioBundle {
    Scenario scenario;
    PerturbationSet perturbations;
    MultiplierSpec multiplier;
    PropagationConvention convention = PropagationConvention::Additive;
    Units file_units = Units::Ratio;  // units the file was written in
};

/// Parses the canonical JSON scenario document. Constant shorthands are
/// expanded, percent values are converted to ratios, unknown keys are
/// rejected, and all domain invariants are enforced via validate_scenario.
/// Throws ParseError for structural problems, ValidationError for invariant
/// violations.
ScenarioBundle parse_scenario_file(const std::string& text);

/// Reads `path` and parses it; errors are tagged with the path.
ScenarioBundle load_scenario_file(const std::string& path);

/// Joint table of the nominal, exact and first-order trajectories.
/// d_nom is the exact engine's unperturbed path; delta_exact = d_exact - d_nom;
/// delta_linear is the deviation recursion under the bundle's convention,
/// and d_linear = linear nominal + delta_linear (so each delta column is its
/// engine's trajectory minus that engine's own nominal).
struct ResultTable {
    struct Row {
        std::size_t t = 0;
        double d_nom = 0.0;
        double d_exact = 0.0;
        double d_linear = 0.0;
        double delta_exact = 0.0;
        double delta_linear = 0.0;
    };
    std::vector<Row> rows;  // horizon + 1 rows, ratio units
    ScenarioBundle source;
};

/// Runs both engines on the bundle. Throws what the engines throw.
ResultTable build_result_table(const ScenarioBundle& bundle);

struct EmitOptions {
    OutputFormat format = OutputFormat::Csv;
    Units units = Units::Ratio;
    std::optional<int> round_digits;  // display rounding, off by default
};

/// Serializers. CSV carries the exact documented header and one row per
/// record; JSON carries a `rows` array plus a `metadata` object that echoes
/// the canonical scenario (so a consumer can re-run the engines from the
/// emitted document). Both are byte-deterministic for identical inputs.
std::string emit_results(const ResultTable& table, const EmitOptions& opt);
std::string emit_sensitivity(const SensitivityMatrix& matrix, const ScenarioBundle& bundle,
                             std::optional<std::size_t> obs_period, const EmitOptions& opt);
std::string emit_threshold(const ThresholdReport& report, const ScenarioBundle& bundle,
                           const EmitOptions& opt);
std::string emit_sweep(const std::vector<EtaSweepRecord>& records, const ScenarioBundle& bundle,
                       std::size_t obs_period, const EmitOptions& opt);

/// Shortest round-trip decimal formatting (std::to_chars), with optional
/// fixed rounding to `round_digits` decimals first. Locale-independent.
std::string format_double(double v, std::optional<int> round_digits = std::nullopt);

}  // namespace debtdyn
