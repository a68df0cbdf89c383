#include "debtdyn/sensitivity.hpp"

#include "debtdyn/engine_exact.hpp"

#include <cmath>
#include <random>
#include <string>

#include "doctest.h"

using namespace debtdyn;

namespace {

Scenario textbook_scenario() { return make_constant_scenario(1.0, 10, 0.03, 0.02, 0.02); }

constexpr double kTextbookCoeffRatio110 = 1.0917758323385538;
constexpr double kTextbookCoeffAdditive110 = 1.0936852726843609;
constexpr double kTextbookDeltaRatioShock4 = -0.009960289209329383;
constexpr double kTextbookExactShock1Delta = 0.011131832016001030;

PerturbationSet single(std::size_t t, double dx) {
    PerturbationSet p;
    p.add(t, dx);
    return p;
}

bool close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

Scenario random_scenario(std::mt19937_64& rng, std::size_t min_horizon = 2) {
    std::uniform_int_distribution<std::size_t> horizon_dist(min_horizon, 30);
    std::uniform_real_distribution<double> rate(-0.05, 0.08);
    std::uniform_real_distribution<double> surplus(-0.05, 0.05);
    std::uniform_real_distribution<double> d0_dist(0.2, 1.8);
    Scenario s;
    s.d0 = d0_dist(rng);
    s.horizon = horizon_dist(rng);
    s.rates.resize(s.horizon);
    s.x_nominal.resize(s.horizon);
    for (std::size_t t = 0; t < s.horizon; ++t) {
        s.rates[t] = RatePair{rate(rng), rate(rng)};
        s.x_nominal[t] = surplus(rng);
    }
    return s;
}

PerturbationSet random_perturbations(std::mt19937_64& rng, std::size_t horizon) {
    std::uniform_int_distribution<std::size_t> nshocks(1, 5);
    std::uniform_int_distribution<std::size_t> period(1, horizon);
    std::uniform_real_distribution<double> dx_dist(-0.02, 0.02);
    PerturbationSet p;
    const std::size_t n = nshocks(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = period(rng);
        if (p.entries().count(t) == 0) {
            p.add(t, dx_dist(rng));
        }
    }
    return p;
}

}  // namespace

TEST_CASE("superpose_delta with no propagation periods is just the coefficient") {
    const Scenario s = textbook_scenario();
    const MultiplierSpec m{2.0};
    const Trajectory nom = simulate_linear_nominal(s);
    for (std::size_t t : {std::size_t{1}, std::size_t{4}, std::size_t{10}}) {
        const double expected = (m.eta * nom.d[t - 1] - 1.0) * 0.01;
        CHECK(superpose_delta(s, single(t, 0.01), m, PropagationConvention::Ratio, t) == expected);
    }
}

TEST_CASE("superpose_delta textbook values and additivity") {
    const Scenario s = textbook_scenario();
    const MultiplierSpec m{2.0};

    const double s4 = superpose_delta(s, single(4, -0.01), m, PropagationConvention::Ratio, 10);
    CHECK(s4 == doctest::Approx(kTextbookDeltaRatioShock4).epsilon(1e-15));

    const double s1 = superpose_delta(s, single(1, 0.01), m, PropagationConvention::Ratio, 10);
    PerturbationSet both;
    both.add(1, 0.01);
    both.add(4, -0.01);
    const double combined = superpose_delta(s, both, m, PropagationConvention::Ratio, 10);
    CHECK(combined == doctest::Approx(s1 + s4).epsilon(1e-15));
}

TEST_CASE("superpose_delta equals the delta recursion everywhere") {
    std::mt19937_64 rng(906090);
    std::uniform_real_distribution<double> eta_dist(0.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        const Scenario s = random_scenario(rng);
        const PerturbationSet p = random_perturbations(rng, s.horizon);
        const MultiplierSpec m{eta_dist(rng)};
        const auto conv =
            trial % 2 == 0 ? PropagationConvention::Additive : PropagationConvention::Ratio;

        const DeltaTrajectory dd = delta_dynamics(s, p, m, conv);
        for (std::size_t obs = 1; obs <= s.horizon; ++obs) {
            CHECK(close(superpose_delta(s, p, m, conv, obs), dd.delta_d[obs], 1e-12));
        }
    }
}

TEST_CASE("superpose_delta validates the observation period") {
    CHECK_THROWS_AS(superpose_delta(textbook_scenario(), single(1, 0.01), MultiplierSpec{2.0},
                                    PropagationConvention::Ratio, 11),
                    ValidationError);
}

TEST_CASE("sensitivity matrix diagonal and textbook corner") {
    const Scenario s = textbook_scenario();
    const MultiplierSpec m{2.0};
    const Trajectory nom = simulate_linear_nominal(s);

    const SensitivityMatrix ratio = sensitivity_matrix(s, m, PropagationConvention::Ratio);
    const SensitivityMatrix additive = sensitivity_matrix(s, m, PropagationConvention::Additive);
    REQUIRE(ratio.horizon() == 10);

    for (std::size_t t = 1; t <= 10; ++t) {
        CHECK(ratio.coeff(t, t) == m.eta * nom.d[t - 1] - 1.0);
        CHECK(additive.coeff(t, t) == m.eta * nom.d[t - 1] - 1.0);
    }
    CHECK(ratio.coeff(1, 10) == doctest::Approx(kTextbookCoeffRatio110).epsilon(1e-15));
    CHECK(additive.coeff(1, 10) == doctest::Approx(kTextbookCoeffAdditive110).epsilon(1e-15));
}

TEST_CASE("a break-even period zeroes its entire matrix row") {
    // eta*d0 = 2*0.5 = 1 exactly, so row 1 vanishes identically.
    const Scenario s = make_constant_scenario(0.5, 6, 0.03, 0.02, 0.02);
    const SensitivityMatrix mat =
        sensitivity_matrix(s, MultiplierSpec{2.0}, PropagationConvention::Additive);
    for (std::size_t obs = 1; obs <= 6; ++obs) {
        CHECK(mat.coeff(1, obs) == 0.0);
    }
}

TEST_CASE("matrix access outside the lower-triangular support throws") {
    const SensitivityMatrix mat =
        sensitivity_matrix(textbook_scenario(), MultiplierSpec{2.0}, PropagationConvention::Ratio);
    CHECK_THROWS_AS((void)mat.coeff(5, 4), ValidationError);
    CHECK_THROWS_AS((void)mat.coeff(0, 4), ValidationError);
    CHECK_THROWS_AS((void)mat.coeff(1, 11), ValidationError);
}

TEST_CASE("matrix contraction matches superpose_delta on random sparse sets") {
    std::mt19937_64 rng(24601);
    std::uniform_real_distribution<double> eta_dist(0.0, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Scenario s = random_scenario(rng);
        const PerturbationSet p = random_perturbations(rng, s.horizon);
        const MultiplierSpec m{eta_dist(rng)};
        const auto conv =
            trial % 2 == 0 ? PropagationConvention::Additive : PropagationConvention::Ratio;
        const SensitivityMatrix mat = sensitivity_matrix(s, m, conv);
        for (std::size_t obs = 1; obs <= s.horizon; ++obs) {
            CHECK(close(mat.contract(p, obs), superpose_delta(s, p, m, conv, obs), 1e-12));
        }
    }
}

TEST_CASE("matrix coefficients match finite differences of the linear engine") {
    std::mt19937_64 rng(1123581321);
    const Scenario s = random_scenario(rng, 6);
    const MultiplierSpec m{1.4};
    const SensitivityMatrix mat = sensitivity_matrix(s, m, PropagationConvention::Additive);

    const double step = 1e-7;
    for (std::size_t shock = 1; shock <= s.horizon; ++shock) {
        const Trajectory up = simulate_linear_perturbed(s, single(shock, step), m);
        const Trajectory down = simulate_linear_perturbed(s, single(shock, -step), m);
        for (std::size_t obs = shock; obs <= s.horizon; ++obs) {
            const double fd = (up.d[obs] - down.d[obs]) / (2.0 * step);
            const double coeff = mat.coeff(shock, obs);
            const double scale = std::max(1e-3, std::fabs(coeff));
            CHECK(std::fabs(fd - coeff) <= 1e-5 * scale);
        }
    }
}

TEST_CASE("threshold report on the textbook scenario") {
    const ThresholdReport rep = threshold_report(textbook_scenario(), MultiplierSpec{2.0});
    REQUIRE(rep.rows.size() == 10);
    for (const auto& row : rep.rows) {
        CHECK(row.classification == ThresholdClass::AusterityRaisesDebtRatio);
        CHECK(row.eta_d == 2.0 * row.d_nom_prev);
    }
    REQUIRE(rep.break_even.has_value());
    CHECK(*rep.break_even == 0.5);
    CHECK(std::string(to_string(rep.rows[0].classification)) == "AUSTERITY_RAISES_DEBT_RATIO");
}

TEST_CASE("threshold report below and on the boundary") {
    // r == g and x == 0 freeze the nominal ratio at d0.
    const Scenario flat = make_constant_scenario(1.0, 5, 0.02, 0.02, 0.0);

    const ThresholdReport low = threshold_report(flat, MultiplierSpec{0.8});
    for (const auto& row : low.rows) {
        CHECK(row.classification == ThresholdClass::AusterityLowersDebtRatio);
    }
    REQUIRE(low.break_even.has_value());
    CHECK(*low.break_even == 1.25);

    const ThresholdReport neutral = threshold_report(flat, MultiplierSpec{1.0});
    for (const auto& row : neutral.rows) {
        CHECK(row.classification == ThresholdClass::Neutral);
    }

    const ThresholdReport no_feedback = threshold_report(flat, MultiplierSpec{0.0});
    CHECK_FALSE(no_feedback.break_even.has_value());
    for (const auto& row : no_feedback.rows) {
        CHECK(row.classification == ThresholdClass::AusterityLowersDebtRatio);
    }
}

TEST_CASE("threshold classification honors the tolerance band") {
    auto classify_first = [](double d0, double eta) {
        const Scenario s = make_constant_scenario(d0, 1, 0.02, 0.02, 0.0);
        return threshold_report(s, MultiplierSpec{eta}).rows[0].classification;
    };
    CHECK(classify_first(1.0 + 2e-9, 1.0) == ThresholdClass::AusterityRaisesDebtRatio);
    CHECK(classify_first(1.0 + 5e-10, 1.0) == ThresholdClass::Neutral);
    CHECK(classify_first(1.0 - 5e-10, 1.0) == ThresholdClass::Neutral);
    CHECK(classify_first(1.0 - 2e-9, 1.0) == ThresholdClass::AusterityLowersDebtRatio);
}

TEST_CASE("eta sweep reproduces the textbook point and keeps input order") {
    const Scenario s = textbook_scenario();
    const std::vector<double> etas{2.0, 0.5, 1.0};
    const auto records =
        eta_sweep(s, single(1, 0.01), etas, PropagationConvention::Ratio, 10);
    REQUIRE(records.size() == 3);
    CHECK(records[0].eta == 2.0);
    CHECK(records[1].eta == 0.5);
    CHECK(records[2].eta == 1.0);
    CHECK(records[0].delta_linear == doctest::Approx(0.010917758323385542).epsilon(1e-15));
    CHECK(records[0].delta_exact == doctest::Approx(kTextbookExactShock1Delta).epsilon(1e-12));
}

TEST_CASE("eta sweep without shocks is identically zero") {
    const Scenario s = textbook_scenario();
    const std::vector<double> etas{0.0, 0.5, 1.0, 2.0, 3.0};
    const auto records =
        eta_sweep(s, PerturbationSet{}, etas, PropagationConvention::Additive, 10);
    for (const auto& rec : records) {
        CHECK(rec.delta_linear == 0.0);
        CHECK(rec.delta_exact == 0.0);
    }
}

TEST_CASE("eta sweep linear deltas cross zero at eta = 1/d0") {
    const double d0 = 1.25;
    const Scenario s = make_constant_scenario(d0, 10, 0.03, 0.02, 0.02);
    std::vector<double> etas;
    for (int i = 0; i <= 40; ++i) {
        etas.push_back(0.05 * i);
    }
    const auto records = eta_sweep(s, single(1, 0.01), etas, PropagationConvention::Additive, 10);

    std::size_t crossing = 0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        if (records[i].delta_linear < 0.0 && records[i + 1].delta_linear >= 0.0) {
            crossing = i;
            found = true;
            break;
        }
    }
    REQUIRE(found);
    const double grid_step = 0.05;
    CHECK(etas[crossing] <= 1.0 / d0 + grid_step);
    CHECK(etas[crossing + 1] >= 1.0 / d0 - grid_step);
}

TEST_CASE("eta sweep tags engine errors with the offending eta") {
    const Scenario s = textbook_scenario();
    const std::vector<double> etas{0.1, 150.0};
    try {
        eta_sweep(s, single(2, 0.01), etas, PropagationConvention::Additive, 10);
        FAIL("expected EngineDomainError");
    } catch (const EngineDomainError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("eta=150") != std::string::npos);
        CHECK(msg.find("t=2") != std::string::npos);
    }
}

TEST_CASE("eta sweep validates its inputs") {
    const Scenario s = textbook_scenario();
    CHECK_THROWS_AS(
        eta_sweep(s, PerturbationSet{}, {}, PropagationConvention::Additive, 10),
        ValidationError);
    CHECK_THROWS_AS(
        eta_sweep(s, PerturbationSet{}, {-1.0}, PropagationConvention::Additive, 10),
        ValidationError);
    CHECK_THROWS_AS(
        eta_sweep(s, PerturbationSet{}, {1.0}, PropagationConvention::Additive, 11),
        ValidationError);
}
