#pragma once

#include "pdc/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testhelp {

// LiIO3-like type-I degenerate parameters (351 nm pump, 702 nm pair),
// wavenumbers from published Sellmeier data. Emission plane perpendicular
// to the walk-off plane: N_p ~ 0, small emission angles.
inline pdc::PhaseMatchConfig perp_config(double L = 5000.0) {
    pdc::PhaseMatchConfig c;
    c.K_p = 33.0444;
    c.K_s = c.K_i = 16.7769;
    c.N_p = 0.0;
    c.N_s = 0.0;
    c.D = 0.0;
    c.theta_i = c.theta_s = 0.0174533;  // 1 degree
    c.L = L;
    return c;
}

// Emission in the walk-off plane: large N_p, 10 degree internal angles.
inline pdc::PhaseMatchConfig inplane_config(double L = 5000.0) {
    pdc::PhaseMatchConfig c;
    c.K_p = 33.0444;
    c.K_s = c.K_i = 16.7769;
    c.N_p = -4.5477;
    c.N_s = 0.0;
    c.D = 0.0;
    c.theta_i = c.theta_s = 0.174533;
    c.L = L;
    return c;
}

inline pdc::BeamGeometry geometry(double w_p = 300.0, double w_o1 = 250.0,
                                  double w_o2 = 250.0) {
    pdc::BeamGeometry g;
    g.w_p = w_p;
    g.w_o1 = w_o1;
    g.w_o2 = w_o2;
    return g;
}

inline double rel_dev(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

// Error function by its everywhere-positive scaled Maclaurin series
//   erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n (2 x^2)^n x / (2n+1)!!
// No alternating cancellation, so double precision holds to ~1e-15 on
// [-6, 6]. Independent of the library implementation.
inline double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        const double prev = sum;
        sum += term;
        if (sum == prev) break;
    }
    return 2.0 / std::sqrt(std::acos(-1.0)) * std::exp(-x2) * sum;
}

// Random validated parameter set; walk-off difference sampled inside the
// admissible interval so a_i, a_s > 0 by construction.
struct ParamSampler {
    std::mt19937 rng;

    explicit ParamSampler(std::uint32_t seed) : rng(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    void sample(pdc::PhaseMatchConfig& c, pdc::BeamGeometry& g) {
        c.K_p = uniform(5.0, 60.0);
        c.K_s = c.K_i = c.K_p / 2.0;
        c.theta_i = uniform(0.005, 0.2);
        c.theta_s = uniform(0.005, 0.2);
        const double nu_lo = -0.9 * c.K_p * c.theta_i;
        const double nu_hi = 0.9 * c.K_p * c.theta_s;
        c.N_p = uniform(nu_lo, nu_hi);
        c.N_s = 0.0;
        c.D = uniform(-0.1, 0.1);
        c.L = log_uniform(1.0, 10000.0);
        g.w_p = log_uniform(20.0, 1000.0);
        g.w_o1 = log_uniform(20.0, 1000.0);
        g.w_o2 = log_uniform(20.0, 1000.0);
        g.w_ap = log_uniform(50.0, 2000.0);
        g.k_fresnel = log_uniform(1e-6, 2e-4);
    }
};

}  // namespace testhelp
