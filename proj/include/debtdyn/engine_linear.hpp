#pragma once

#include "debtdyn/domain.hpp"

namespace debtdyn {

/// How an inherited deviation propagates one period forward.
/// Additive uses 1 + r_t - g_nom_t (the first-order factor); Ratio uses
/// (1 + r_t) / (1 + g_nom_t). Additive is the default.
enum class PropagationConvention {
    Additive,
    Ratio,
};

inline double propagation_factor(const RatePair& rp, PropagationConvention conv) {
    return conv == PropagationConvention::Ratio
               ? (1.0 + rp.interest) / (1.0 + rp.growth_nominal)
               : 1.0 + rp.interest - rp.growth_nominal;
}

/// First-order nominal trajectory:
///   d_t = d_{t-1} * (1 + r_t - g_nom_t) - x_nom_t
Trajectory simulate_linear_nominal(const Scenario& s);

/// First-order perturbed trajectory:
///   d_t = d_{t-1} * (1 + r_t - g_nom_t) - x_nom_t + (eta * d_nom_{t-1} - 1) * dx_t
/// The shock coefficient is evaluated on the nominal trajectory (the
/// first-order evaluation point), so perturbed minus nominal equals
/// delta_dynamics with the Additive convention identically.
Trajectory simulate_linear_perturbed(const Scenario& s, const PerturbationSet& p,
                                     const MultiplierSpec& m);

/// Deviation recursion:
///   delta_0 = 0
///   delta_t = delta_{t-1} * F_t + (eta * d_nom_{t-1} - 1) * dx_t
/// with F_t given by the convention and d_nom the linear nominal trajectory.
DeltaTrajectory delta_dynamics(const Scenario& s, const PerturbationSet& p,
                               const MultiplierSpec& m, PropagationConvention conv);

}  // namespace debtdyn
