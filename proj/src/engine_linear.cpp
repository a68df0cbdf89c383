#include "debtdyn/engine_linear.hpp"

namespace debtdyn {

namespace {

void check_inputs(const Scenario& s, const PerturbationSet& p, const MultiplierSpec& m) {
    validate_scenario(s);
    validate_perturbations(p, s.horizon);
    validate_multiplier(m);
}

}  // namespace

Trajectory simulate_linear_nominal(const Scenario& s) {
    validate_scenario(s);
    Trajectory out;
    out.d.resize(s.horizon + 1);
    out.d[0] = s.d0;
    for (std::size_t t = 1; t <= s.horizon; ++t) {
        const RatePair& rp = s.rates[t - 1];
        out.d[t] = out.d[t - 1] * (1.0 + rp.interest - rp.growth_nominal) - s.x_nominal[t - 1];
    }
    return out;
}

Trajectory simulate_linear_perturbed(const Scenario& s, const PerturbationSet& p,
                                     const MultiplierSpec& m) {
    check_inputs(s, p, m);
    Trajectory out;
    out.d.resize(s.horizon + 1);
    out.d[0] = s.d0;
    double d_nom_prev = s.d0;
    for (std::size_t t = 1; t <= s.horizon; ++t) {
        const RatePair& rp = s.rates[t - 1];
        const double factor = 1.0 + rp.interest - rp.growth_nominal;
        out.d[t] = out.d[t - 1] * factor - s.x_nominal[t - 1] +
                   (m.eta * d_nom_prev - 1.0) * p.at(t);
        d_nom_prev = d_nom_prev * factor - s.x_nominal[t - 1];
    }
    return out;
}

DeltaTrajectory delta_dynamics(const Scenario& s, const PerturbationSet& p,
                               const MultiplierSpec& m, PropagationConvention conv) {
    check_inputs(s, p, m);
    DeltaTrajectory out;
    out.delta_d.resize(s.horizon + 1);
    out.delta_d[0] = 0.0;
    double d_nom_prev = s.d0;
    for (std::size_t t = 1; t <= s.horizon; ++t) {
        const RatePair& rp = s.rates[t - 1];
        out.delta_d[t] = out.delta_d[t - 1] * propagation_factor(rp, conv) +
                         (m.eta * d_nom_prev - 1.0) * p.at(t);
        d_nom_prev = d_nom_prev * (1.0 + rp.interest - rp.growth_nominal) - s.x_nominal[t - 1];
    }
    return out;
}

}  // namespace debtdyn
