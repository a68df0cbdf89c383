#include "debtdyn/sensitivity.hpp"

#include "debtdyn/engine_exact.hpp"

#include <cstdint>
#include <sstream>

namespace debtdyn {

namespace {

void check_inputs(const Scenario& s, const PerturbationSet& p, const MultiplierSpec& m) {
    validate_scenario(s);
    validate_perturbations(p, s.horizon);
    validate_multiplier(m);
}

// Fills one matrix row: seed the diagonal with the shock coefficient, then
// push it forward one propagation factor at a time. Same operation order as
// the running product in superpose_delta.
void fill_row(SensitivityMatrix& out, const Scenario& s, double eta,
              const std::vector<double>& d_nom, PropagationConvention conv,
              std::size_t shock_period) {
    double c = eta * d_nom[shock_period - 1] - 1.0;
    out.coeff(shock_period, shock_period) = c;
    for (std::size_t obs = shock_period + 1; obs <= s.horizon; ++obs) {
        c *= propagation_factor(s.rates[obs - 1], conv);
        out.coeff(shock_period, obs) = c;
    }
}

EtaSweepRecord sweep_one(const Scenario& s, const PerturbationSet& p, double eta,
                         PropagationConvention conv, std::size_t obs_period,
                         double exact_nominal_at_obs) {
    const MultiplierSpec m{eta};
    EtaSweepRecord rec;
    rec.eta = eta;
    rec.delta_linear = delta_dynamics(s, p, m, conv).delta_d[obs_period];
    rec.delta_exact = simulate_exact(s, p, m).d[obs_period] - exact_nominal_at_obs;
    return rec;
}

}  // namespace

SensitivityMatrix::SensitivityMatrix(std::size_t horizon) : horizon_(horizon) {
    row_.resize(horizon);
    std::size_t offset = 0;
    for (std::size_t m = 1; m <= horizon; ++m) {
        row_[m - 1] = offset;
        offset += horizon - m + 1;  // entries for obs periods m..horizon
    }
    coeff_.assign(offset, 0.0);
}

std::size_t SensitivityMatrix::index(std::size_t shock_period, std::size_t obs_period) const {
    if (shock_period < 1 || shock_period > horizon_ || obs_period < shock_period ||
        obs_period > horizon_) {
        std::ostringstream os;
        os << "sensitivity index out of support: m=" << shock_period << " T=" << obs_period
           << " horizon=" << horizon_;
        throw ValidationError(os.str());
    }
    return row_[shock_period - 1] + (obs_period - shock_period);
}

double SensitivityMatrix::coeff(std::size_t shock_period, std::size_t obs_period) const {
    return coeff_[index(shock_period, obs_period)];
}

double& SensitivityMatrix::coeff(std::size_t shock_period, std::size_t obs_period) {
    return coeff_[index(shock_period, obs_period)];
}

double SensitivityMatrix::contract(const PerturbationSet& p, std::size_t obs_period) const {
    double total = 0.0;
    for (const auto& [t, dx] : p.entries()) {
        if (t > obs_period) {
            continue;
        }
        total += coeff(t, obs_period) * dx;
    }
    return total;
}

const char* to_string(ThresholdClass c) {
    switch (c) {
        case ThresholdClass::AusterityRaisesDebtRatio: return "AUSTERITY_RAISES_DEBT_RATIO";
        case ThresholdClass::Neutral: return "NEUTRAL";
        case ThresholdClass::AusterityLowersDebtRatio: return "AUSTERITY_LOWERS_DEBT_RATIO";
    }
    return "UNKNOWN";
}

double superpose_delta(const Scenario& s, const PerturbationSet& p,
                       const MultiplierSpec& m, PropagationConvention conv,
                       std::size_t obs_period) {
    check_inputs(s, p, m);
    if (obs_period > s.horizon) {
        std::ostringstream os;
        os << "observation period " << obs_period << " exceeds horizon " << s.horizon;
        throw ValidationError(os.str());
    }
    const Trajectory d_nom = simulate_linear_nominal(s);
    double total = 0.0;
    for (const auto& [shock, dx] : p.entries()) {
        if (shock > obs_period) {
            continue;
        }
        double c = (m.eta * d_nom.d[shock - 1] - 1.0) * dx;
        for (std::size_t j = shock + 1; j <= obs_period; ++j) {
            c *= propagation_factor(s.rates[j - 1], conv);
        }
        total += c;
    }
    return total;
}

SensitivityMatrix sensitivity_matrix_serial(const Scenario& s, const MultiplierSpec& m,
                                            PropagationConvention conv) {
    validate_scenario(s);
    validate_multiplier(m);
    const Trajectory d_nom = simulate_linear_nominal(s);
    SensitivityMatrix out(s.horizon);
    for (std::size_t shock = 1; shock <= s.horizon; ++shock) {
        fill_row(out, s, m.eta, d_nom.d, conv, shock);
    }
    return out;
}

SensitivityMatrix sensitivity_matrix(const Scenario& s, const MultiplierSpec& m,
                                     PropagationConvention conv) {
    validate_scenario(s);
    validate_multiplier(m);
    const Trajectory d_nom = simulate_linear_nominal(s);
    SensitivityMatrix out(s.horizon);
    const std::int64_t n = static_cast<std::int64_t>(s.horizon);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::int64_t shock = 1; shock <= n; ++shock) {
        fill_row(out, s, m.eta, d_nom.d, conv, static_cast<std::size_t>(shock));
    }
    return out;
}

ThresholdReport threshold_report(const Scenario& s, const MultiplierSpec& m) {
    validate_scenario(s);
    validate_multiplier(m);
    const Trajectory d_nom = simulate_linear_nominal(s);

    ThresholdReport report;
    report.rows.reserve(s.horizon);
    for (std::size_t t = 1; t <= s.horizon; ++t) {
        ThresholdReport::Row row;
        row.t = t;
        row.d_nom_prev = d_nom.d[t - 1];
        row.eta_d = m.eta * row.d_nom_prev;
        if (row.eta_d > 1.0 + kThresholdTolerance) {
            row.classification = ThresholdClass::AusterityRaisesDebtRatio;
        } else if (row.eta_d < 1.0 - kThresholdTolerance) {
            row.classification = ThresholdClass::AusterityLowersDebtRatio;
        } else {
            row.classification = ThresholdClass::Neutral;
        }
        report.rows.push_back(row);
    }
    if (m.eta > 0.0) {
        report.break_even = 1.0 / m.eta;
    }
    return report;
}

namespace {

void check_sweep_inputs(const Scenario& s, const PerturbationSet& p,
                        const std::vector<double>& etas, std::size_t obs_period) {
    validate_scenario(s);
    validate_perturbations(p, s.horizon);
    if (etas.empty()) {
        throw ValidationError("eta sweep requires at least one eta");
    }
    for (double eta : etas) {
        validate_multiplier(MultiplierSpec{eta});
    }
    if (obs_period > s.horizon) {
        std::ostringstream os;
        os << "observation period " << obs_period << " exceeds horizon " << s.horizon;
        throw ValidationError(os.str());
    }
}

[[noreturn]] void rethrow_tagged(double eta, const std::string& message) {
    std::ostringstream os;
    os << "eta=" << eta << ": " << message;
    throw EngineDomainError(os.str());
}

}  // namespace

std::vector<EtaSweepRecord> eta_sweep_serial(const Scenario& s, const PerturbationSet& p,
                                             const std::vector<double>& etas,
                                             PropagationConvention conv,
                                             std::size_t obs_period) {
    check_sweep_inputs(s, p, etas, obs_period);
    const double exact_nominal =
        simulate_exact(s, PerturbationSet{}, MultiplierSpec{0.0}).d[obs_period];

    std::vector<EtaSweepRecord> out(etas.size());
    for (std::size_t i = 0; i < etas.size(); ++i) {
        try {
            out[i] = sweep_one(s, p, etas[i], conv, obs_period, exact_nominal);
        } catch (const EngineDomainError& e) {
            rethrow_tagged(etas[i], e.what());
        }
    }
    return out;
}

std::vector<EtaSweepRecord> eta_sweep(const Scenario& s, const PerturbationSet& p,
                                      const std::vector<double>& etas,
                                      PropagationConvention conv,
                                      std::size_t obs_period) {
    check_sweep_inputs(s, p, etas, obs_period);
    const double exact_nominal =
        simulate_exact(s, PerturbationSet{}, MultiplierSpec{0.0}).d[obs_period];

    std::vector<EtaSweepRecord> out(etas.size());
    std::vector<std::string> errors(etas.size());
    std::vector<std::uint8_t> failed(etas.size(), 0);
    const std::int64_t n = static_cast<std::int64_t>(etas.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            out[idx] = sweep_one(s, p, etas[idx], conv, obs_period, exact_nominal);
        } catch (const std::exception& e) {
            failed[idx] = 1;
            errors[idx] = e.what();
        }
    }
    // Results must come back in input order; so must the first error.
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (failed[i]) {
            rethrow_tagged(etas[i], errors[i]);
        }
    }
    return out;
}

}  // namespace debtdyn
