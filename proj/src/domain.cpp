#include "debtdyn/domain.hpp"

#include <cmath>
#include <sstream>

namespace debtdyn {

namespace {

bool finite(double v) { return std::isfinite(v); }

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

}  // namespace

void PerturbationSet::add(std::size_t period, double dx) {
    if (period < 1) {
        fail("perturbation period must be >= 1");
    }
    if (!finite(dx)) {
        std::ostringstream os;
        os << "perturbation value not finite at t=" << period;
        fail(os.str());
    }
    auto [it, inserted] = entries_.emplace(period, dx);
    (void)it;
    if (!inserted) {
        std::ostringstream os;
        os << "duplicate perturbation at t=" << period;
        fail(os.str());
    }
}

double PerturbationSet::at(std::size_t period) const {
    auto it = entries_.find(period);
    return it == entries_.end() ? 0.0 : it->second;
}

double compose_nominal_growth(double g_real, double deflator) {
    if (!finite(g_real) || !finite(deflator)) {
        fail("growth factor not finite");
    }
    if (1.0 + g_real <= 0.0 || 1.0 + deflator <= 0.0) {
        fail("growth factor non-positive");
    }
    return g_real + deflator + g_real * deflator;
}

const Scenario& validate_scenario(const Scenario& s) {
    if (s.horizon < 1) {
        fail("horizon must be >= 1");
    }
    if (!finite(s.d0)) {
        fail("d0 not finite");
    }
    if (s.rates.size() != s.horizon) {
        std::ostringstream os;
        os << "length mismatch: rates has " << s.rates.size()
           << " entries, horizon is " << s.horizon;
        fail(os.str());
    }
    if (s.x_nominal.size() != s.horizon) {
        std::ostringstream os;
        os << "length mismatch: x_nom has " << s.x_nominal.size()
           << " entries, horizon is " << s.horizon;
        fail(os.str());
    }
    for (std::size_t t = 1; t <= s.horizon; ++t) {
        const RatePair& rp = s.rates[t - 1];
        if (!finite(rp.interest)) {
            std::ostringstream os;
            os << "interest rate not finite at t=" << t;
            fail(os.str());
        }
        if (!finite(rp.growth_nominal)) {
            std::ostringstream os;
            os << "growth rate not finite at t=" << t;
            fail(os.str());
        }
        if (1.0 + rp.growth_nominal <= 0.0) {
            std::ostringstream os;
            os << "growth factor non-positive at t=" << t;
            fail(os.str());
        }
        if (!finite(s.x_nominal[t - 1])) {
            std::ostringstream os;
            os << "surplus not finite at t=" << t;
            fail(os.str());
        }
    }
    return s;
}

void validate_perturbations(const PerturbationSet& p, std::size_t horizon) {
    for (const auto& [t, dx] : p.entries()) {
        (void)dx;
        if (t < 1 || t > horizon) {
            std::ostringstream os;
            os << "perturbation period out of range at t=" << t
               << " (horizon is " << horizon << ")";
            fail(os.str());
        }
    }
}

void validate_multiplier(const MultiplierSpec& m) {
    if (!finite(m.eta) || m.eta < 0.0) {
        fail("eta must be finite and >= 0");
    }
}

void validate_level_state(const LevelState& ls, const Scenario& s) {
    if (!finite(ls.debt0)) {
        fail("debt0 not finite");
    }
    if (!finite(ls.gdp0) || ls.gdp0 <= 0.0) {
        fail("gdp0 must be positive");
    }
    const bool has_real = ls.real_growth.has_value();
    const bool has_defl = ls.deflator.has_value();
    if (has_real != has_defl) {
        fail("real_growth and deflator must be given together");
    }
    if (!has_real) {
        return;
    }
    if (ls.real_growth->size() != s.horizon || ls.deflator->size() != s.horizon) {
        fail("length mismatch: real_growth/deflator must match horizon");
    }
    for (std::size_t t = 1; t <= s.horizon; ++t) {
        const double composed =
            compose_nominal_growth((*ls.real_growth)[t - 1], (*ls.deflator)[t - 1]);
        if (std::fabs(composed - s.rates[t - 1].growth_nominal) > 1e-12) {
            std::ostringstream os;
            os << "composed growth does not match g_nom at t=" << t;
            fail(os.str());
        }
    }
}

Scenario make_constant_scenario(double d0, std::size_t horizon, double interest,
                                double growth_nominal, double x_nominal) {
    Scenario s;
    s.d0 = d0;
    s.horizon = horizon;
    s.rates.assign(horizon, RatePair{interest, growth_nominal});
    s.x_nominal.assign(horizon, x_nominal);
    return s;
}

}  // namespace debtdyn
