#include "debtdyn/sensitivity.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

// Times the OpenMP kernels against their serial references on synthetic
// workloads large enough to matter, and checks that both produce identical
// results while at it.

namespace {

using namespace debtdyn;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Scenario random_scenario(std::size_t horizon, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rate(-0.02, 0.05);
    std::uniform_real_distribution<double> surplus(-0.02, 0.02);
    Scenario s;
    s.d0 = 1.0;
    s.horizon = horizon;
    s.rates.resize(horizon);
    s.x_nominal.resize(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        s.rates[t] = RatePair{rate(rng), rate(rng)};
        s.x_nominal[t] = surplus(rng);
    }
    return s;
}

bool equal_matrices(const SensitivityMatrix& a, const SensitivityMatrix& b) {
    return a.packed() == b.packed();
}

bool equal_sweeps(const std::vector<EtaSweepRecord>& a, const std::vector<EtaSweepRecord>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].eta != b[i].eta || a[i].delta_linear != b[i].delta_linear ||
            a[i].delta_exact != b[i].delta_exact) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; parallel entry points run serially\n");
#endif

    // Sensitivity matrix: horizon^2/2 coefficients.
    {
        const std::size_t horizon = 6000;
        const Scenario s = random_scenario(horizon, 42);
        const MultiplierSpec m{1.5};

        auto t0 = Clock::now();
        const SensitivityMatrix serial =
            sensitivity_matrix_serial(s, m, PropagationConvention::Ratio);
        const double t_serial = seconds_since(t0);

        t0 = Clock::now();
        const SensitivityMatrix parallel =
            sensitivity_matrix(s, m, PropagationConvention::Ratio);
        const double t_parallel = seconds_since(t0);

        std::printf("sensitivity_matrix  T=%zu (%zu coeffs): serial %.3fs, parallel %.3fs, "
                    "speedup %.2fx, equal=%s\n",
                    horizon, serial.packed().size(), t_serial, t_parallel,
                    t_serial / t_parallel, equal_matrices(serial, parallel) ? "yes" : "NO");
        if (!equal_matrices(serial, parallel)) {
            return 1;
        }
    }

    // Eta sweep: both engines per grid point.
    {
        const std::size_t horizon = 2000;
        const Scenario s = random_scenario(horizon, 7);
        PerturbationSet p;
        p.add(1, 0.01);
        p.add(horizon / 2, -0.005);

        std::vector<double> etas(20000);
        for (std::size_t i = 0; i < etas.size(); ++i) {
            etas[i] = 3.0 * static_cast<double>(i) / static_cast<double>(etas.size() - 1);
        }

        auto t0 = Clock::now();
        const auto serial =
            eta_sweep_serial(s, p, etas, PropagationConvention::Additive, horizon);
        const double t_serial = seconds_since(t0);

        t0 = Clock::now();
        const auto parallel = eta_sweep(s, p, etas, PropagationConvention::Additive, horizon);
        const double t_parallel = seconds_since(t0);

        std::printf("eta_sweep           T=%zu, %zu etas: serial %.3fs, parallel %.3fs, "
                    "speedup %.2fx, equal=%s\n",
                    horizon, etas.size(), t_serial, t_parallel, t_serial / t_parallel,
                    equal_sweeps(serial, parallel) ? "yes" : "NO");
        if (!equal_sweeps(serial, parallel)) {
            return 1;
        }
    }

    return 0;
}
