#include "debtdyn/engine_exact.hpp"

#include <cmath>
#include <sstream>

namespace debtdyn {

namespace {

[[noreturn]] void growth_collapsed(std::size_t t, double g_eff) {
    std::ostringstream os;
    os << "effective growth factor non-positive at t=" << t
       << " (1+g = " << 1.0 + g_eff << ")";
    throw EngineDomainError(os.str());
}

void check_inputs(const Scenario& s, const PerturbationSet& p, const MultiplierSpec& m) {
    validate_scenario(s);
    validate_perturbations(p, s.horizon);
    validate_multiplier(m);
}

}  // namespace

Trajectory simulate_exact(const Scenario& s, const PerturbationSet& p,
                          const MultiplierSpec& m) {
    check_inputs(s, p, m);

    Trajectory out;
    out.d.resize(s.horizon + 1);
    out.d[0] = s.d0;
    for (std::size_t t = 1; t <= s.horizon; ++t) {
        const double dx = p.at(t);
        const double g_eff = s.rates[t - 1].growth_nominal - m.eta * dx;
        if (1.0 + g_eff <= 0.0) {
            growth_collapsed(t, g_eff);
        }
        const double x_eff = s.x_nominal[t - 1] + dx;
        out.d[t] = out.d[t - 1] * (1.0 + s.rates[t - 1].interest) / (1.0 + g_eff) - x_eff;
        if (!std::isfinite(out.d[t])) {
            std::ostringstream os;
            os << "debt ratio not finite at t=" << t;
            throw EngineDomainError(os.str());
        }
    }
    return out;
}

LevelTrajectory simulate_levels(const LevelState& ls, const Scenario& s,
                                const PerturbationSet& p, const MultiplierSpec& m) {
    check_inputs(s, p, m);
    validate_level_state(ls, s);

    LevelTrajectory out;
    out.debt.resize(s.horizon + 1);
    out.gdp.resize(s.horizon + 1);
    out.debt[0] = ls.debt0;
    out.gdp[0] = ls.gdp0;
    for (std::size_t t = 1; t <= s.horizon; ++t) {
        const double dx = p.at(t);
        const double g_eff = s.rates[t - 1].growth_nominal - m.eta * dx;
        if (1.0 + g_eff <= 0.0) {
            growth_collapsed(t, g_eff);
        }
        const double x_eff = s.x_nominal[t - 1] + dx;
        out.gdp[t] = out.gdp[t - 1] * (1.0 + g_eff);
        out.debt[t] = out.debt[t - 1] * (1.0 + s.rates[t - 1].interest) - x_eff * out.gdp[t];
        if (!std::isfinite(out.debt[t]) || !std::isfinite(out.gdp[t])) {
            std::ostringstream os;
            os << "level not finite at t=" << t;
            throw EngineDomainError(os.str());
        }
    }
    return out;
}

}  // namespace debtdyn
