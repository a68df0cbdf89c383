#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace debtdyn {

// Everything internal is a dimensionless fraction: a debt ratio of 1.0 means
// 100% of GDP, a surplus of 0.02 means 2% of GDP. Percent values exist only
// at I/O boundaries.

/// Input violates a documented invariant (bad scenario, bad perturbation, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The recursion left its domain of sense (e.g. feedback pushed growth to -100%).
class EngineDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Per-period interest and nominal growth, both as fractions.
struct RatePair {
    double interest = 0.0;
    double growth_nominal = 0.0;

    friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// The nominal plan: initial ratio, horizon T, per-period rates and surpluses.
/// Periods are 1..T; index 0 of a trajectory holds the initial condition.
struct Scenario {
    double d0 = 0.0;
    std::size_t horizon = 0;
    std::vector<RatePair> rates;     // length == horizon
    std::vector<double> x_nominal;   // length == horizon, surplus/GDP fractions
};

/// The exogenous fiscal multiplier eta (>= 0; 0 disables feedback).
struct MultiplierSpec {
    double eta = 0.0;
};

/// Sparse surplus deviations keyed by period, 1-based. At most one per period.
class PerturbationSet {
public:
    PerturbationSet() = default;

    /// Throws ValidationError on duplicate period or period < 1.
    void add(std::size_t period, double dx);

    /// Deviation at `period`, 0.0 when absent.
    double at(std::size_t period) const;

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::map<std::size_t, double>& entries() const { return entries_; }

private:
    std::map<std::size_t, double> entries_;
};

/// Debt-ratio path d[0..T]; d[0] is the initial condition.
struct Trajectory {
    std::vector<double> d;
};

/// Deviation path delta_d[0..T] with delta_d[0] == 0.
struct DeltaTrajectory {
    std::vector<double> delta_d;
};

/// Currency-level initial state for the level-space recursion. The optional
/// real-growth/deflator split must compose to the scenario's nominal growth.
struct LevelState {
    double debt0 = 0.0;
    double gdp0 = 0.0;
    std::optional<std::vector<double>> real_growth;
    std::optional<std::vector<double>> deflator;
};

/// (1+g_real)(1+deflator) - 1, computed as g + p + g*p so a zero deflator is
/// an exact identity. Throws ValidationError if either factor is <= -1.
double compose_nominal_growth(double g_real, double deflator);

inline double percent_to_ratio(double v) { return v / 100.0; }
inline double ratio_to_percent(double v) { return v * 100.0; }

/// Returns `s` unchanged iff every Scenario invariant holds; otherwise throws
/// ValidationError naming the first violated invariant and period index.
const Scenario& validate_scenario(const Scenario& s);

/// Perturbation periods must fall in [1, horizon].
void validate_perturbations(const PerturbationSet& p, std::size_t horizon);

/// eta must be finite and >= 0.
void validate_multiplier(const MultiplierSpec& m);

/// LevelState must be consistent with `s`: gdp0 > 0, optional sequences of
/// length horizon, and composed growth equal to g_nominal within 1e-12.
void validate_level_state(const LevelState& ls, const Scenario& s);

/// Convenience: constant-rate scenario (the shape of most textbook examples).
Scenario make_constant_scenario(double d0, std::size_t horizon, double interest,
                                double growth_nominal, double x_nominal);

}  // namespace debtdyn
