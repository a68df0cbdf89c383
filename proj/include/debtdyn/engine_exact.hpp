#pragma once

#include "debtdyn/domain.hpp"

namespace debtdyn {

/// Exact nonlinear ratio recursion with multiplier feedback on growth:
///   g_t = g_nom_t - eta * dx_t
///   x_t = x_nom_t + dx_t
///   d_t = d_{t-1} * (1 + r_t) / (1 + g_t) - x_t
/// Throws EngineDomainError (period-stamped) if feedback drives 1 + g_t <= 0.
Trajectory simulate_exact(const Scenario& s, const PerturbationSet& p,
                          const MultiplierSpec& m);

struct LevelTrajectory {
    std::vector<double> debt;  // D[0..T], currency units
    std::vector<double> gdp;   // G[0..T], currency units
};

/// Level-space recursion, the cross-check oracle for simulate_exact:
///   G_t = G_{t-1} * (1 + g_t),  D_t = D_{t-1} * (1 + r_t) - x_t * G_t
/// with the same effective g_t, x_t as the ratio engine. Payments are priced
/// at period-t GDP, which makes D_t / G_t identical to the ratio recursion.
LevelTrajectory simulate_levels(const LevelState& ls, const Scenario& s,
                                const PerturbationSet& p, const MultiplierSpec& m);

}  // namespace debtdyn
