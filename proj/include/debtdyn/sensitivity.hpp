#pragma once

#include "debtdyn/engine_linear.hpp"

#include <optional>
#include <vector>

namespace debtdyn {

/// Lower-triangular matrix of first-order coefficients
///   coeff(m, T) = d(delta_d_T) / d(dx_m),  1 <= m <= T <= horizon,
/// stored packed row-major. Entries with T < m are outside the support.
class SensitivityMatrix {
public:
    SensitivityMatrix() = default;
    explicit SensitivityMatrix(std::size_t horizon);

    std::size_t horizon() const { return horizon_; }

    double coeff(std::size_t shock_period, std::size_t obs_period) const;
    double& coeff(std::size_t shock_period, std::size_t obs_period);

    /// Sum_m coeff(m, obs_period) * dx_m over the perturbation's entries.
    double contract(const PerturbationSet& p, std::size_t obs_period) const;

    const std::vector<double>& packed() const { return coeff_; }

private:
    std::size_t index(std::size_t shock_period, std::size_t obs_period) const;

    std::size_t horizon_ = 0;
    std::vector<double> coeff_;      // packed lower-triangular rows
    std::vector<std::size_t> row_;   // row start offsets, row_[m-1] for period m
};

enum class ThresholdClass {
    AusterityRaisesDebtRatio,   // eta * d_nom_{t-1} > 1 + tol
    Neutral,                    // |eta * d_nom_{t-1} - 1| <= tol
    AusterityLowersDebtRatio,   // eta * d_nom_{t-1} < 1 - tol
};

const char* to_string(ThresholdClass c);

/// Per-period classification of the sign of the one-period surplus response,
/// evaluated on the linear nominal trajectory. break_even = 1/eta is the debt
/// ratio at which the response vanishes; absent when eta == 0.
struct ThresholdReport {
    struct Row {
        std::size_t t = 0;
        double d_nom_prev = 0.0;   // d_nom_{t-1}
        double eta_d = 0.0;        // eta * d_nom_{t-1}
        ThresholdClass classification = ThresholdClass::Neutral;
    };
    std::vector<Row> rows;                 // one per period 1..T
    std::optional<double> break_even;      // 1/eta, absent for eta == 0
};

/// Band around eta*d == 1 inside which the response is classified Neutral.
inline constexpr double kThresholdTolerance = 1e-9;

struct EtaSweepRecord {
    double eta = 0.0;
    double delta_linear = 0.0;   // delta_dynamics(...)[T_obs]
    double delta_exact = 0.0;    // simulate_exact(p) - simulate_exact(empty) at T_obs
};

/// Closed form of the deviation at obs_period:
///   sum_{m <= T_obs} (eta * d_nom_{m-1} - 1) * dx_m * prod_{j=m+1..T_obs} F_j.
/// Identical to delta_dynamics(...)[obs_period] up to rounding.
double superpose_delta(const Scenario& s, const PerturbationSet& p,
                       const MultiplierSpec& m, PropagationConvention conv,
                       std::size_t obs_period);

/// Full unit-shock coefficient matrix. Rows are independent; the default entry
/// point parallelizes over shock periods with OpenMP when available.
SensitivityMatrix sensitivity_matrix(const Scenario& s, const MultiplierSpec& m,
                                     PropagationConvention conv);

/// Single-threaded reference implementation, kept for testing and benchmarks.
SensitivityMatrix sensitivity_matrix_serial(const Scenario& s, const MultiplierSpec& m,
                                            PropagationConvention conv);

ThresholdReport threshold_report(const Scenario& s, const MultiplierSpec& m);

/// Evaluates both engines for each eta, in input order. Per-eta evaluations
/// are independent; the default entry point runs them in parallel with OpenMP
/// when available. Engine errors are rethrown tagged with the offending eta.
std::vector<EtaSweepRecord> eta_sweep(const Scenario& s, const PerturbationSet& p,
                                      const std::vector<double>& etas,
                                      PropagationConvention conv,
                                      std::size_t obs_period);

/// Single-threaded reference implementation, kept for testing and benchmarks.
std::vector<EtaSweepRecord> eta_sweep_serial(const Scenario& s, const PerturbationSet& p,
                                             const std::vector<double>& etas,
                                             PropagationConvention conv,
                                             std::size_t obs_period);

}  // namespace debtdyn
