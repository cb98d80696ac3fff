#include "pdc/dispersion.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace pdc;

namespace {

DispersionTable tabulate(const std::function<double(double, double)>& n, double om_lo,
                         double om_hi, std::size_t n_om, double ph_lo, double ph_hi,
                         std::size_t n_ph) {
    DispersionTable t;
    for (std::size_t i = 0; i < n_om; ++i)
        t.omega.push_back(om_lo + (om_hi - om_lo) * i / double(n_om - 1));
    for (std::size_t j = 0; j < n_ph; ++j)
        t.phi.push_back(ph_lo + (ph_hi - ph_lo) * j / double(n_ph - 1));
    for (double om : t.omega)
        for (double ph : t.phi) t.n.push_back(n(om, ph));
    return t;
}

constexpr double c_um = speed_of_light_um_per_s;

}  // namespace

TEST_CASE("phi-independent tables give zero walk-off") {
    auto flat = [](double, double) { return 1.8; };
    DispersionSamples s;
    s.pump = tabulate(flat, 5e15, 6e15, 5, 0.5, 0.9, 5);
    s.signal = tabulate(flat, 2.4e15, 3.0e15, 5, 0.5, 0.9, 5);
    s.idler = s.signal;
    auto r = walkoff_from_dispersion(s, 5.4e15, 2.7e15, 2.7e15, 0.7);
    CHECK(r.N_p == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.N_s == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.K_p == doctest::Approx(1.8 * 5.4e15 / c_um).epsilon(1e-12));
}

TEST_CASE("degenerate type-I gives D = 0") {
    // identical signal/idler tables at the same frequency
    auto n = [](double om, double ph) { return 1.8 + 1e-17 * om + 0.01 * ph * ph; };
    DispersionSamples s;
    s.pump = tabulate(n, 5e15, 6e15, 7, 0.5, 0.9, 7);
    s.signal = tabulate(n, 2.4e15, 3.0e15, 7, 0.5, 0.9, 7);
    s.idler = s.signal;
    auto r = walkoff_from_dispersion(s, 5.4e15, 2.7e15, 2.7e15, 0.7);
    CHECK(r.D == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quadratic synthetic table is differentiated to near machine accuracy") {
    // n quadratic in both axes: the 3-point stencil is exact up to roundoff.
    auto n = [](double om, double ph) {
        const double x = om / 1e15;
        return 1.6 + 0.02 * x + 0.004 * x * x + 0.3 * ph - 0.08 * ph * ph;
    };
    DispersionSamples s;
    s.pump = tabulate(n, 5e15, 6e15, 9, 0.4, 1.0, 9);
    s.signal = tabulate(n, 2.4e15, 3.0e15, 9, 0.4, 1.0, 9);
    s.idler = tabulate(n, 2.2e15, 2.9e15, 9, 0.4, 1.0, 9);

    const double Omega_p = 5.43e15, Omega_s = 2.71e15, Omega_i = 2.72e15, phi0 = 0.63;
    auto r = walkoff_from_dispersion(s, Omega_p, Omega_s, Omega_i, phi0);

    const double dn_dphi = 0.3 - 0.16 * phi0;
    CHECK(std::abs(r.N_p / ((Omega_p / c_um) * dn_dphi) - 1.0) < 1e-6);
    CHECK(std::abs(r.N_s / ((Omega_s / c_um) * dn_dphi) - 1.0) < 1e-6);

    auto dn_dom = [](double om) { return (0.02 + 0.008 * om / 1e15) / 1e15; };
    const double d_expected = -(n(Omega_i, phi0) + Omega_i * dn_dom(Omega_i)) +
                              (n(Omega_s, phi0) + Omega_s * dn_dom(Omega_s));
    CHECK(std::abs(r.D - d_expected) < 1e-9);
}

TEST_CASE("grid refinement converges at second order on a smooth table") {
    auto n = [](double, double ph) { return 1.7 + 0.05 * std::sin(3.0 * ph); };
    // phi0 on a binary-exact node shared by both grids, so the stencil is
    // centered identically and halving the spacing divides the error by ~4.
    const double Omega = 5.4e15, phi0 = 0.4375;
    const double exact = (Omega / c_um) * 0.15 * std::cos(3.0 * phi0);

    auto err_at = [&](std::size_t pts) {
        DispersionSamples s;
        s.pump = tabulate(n, 5e15, 6e15, 5, 0.0, 1.0, pts);
        s.signal = s.pump;
        s.idler = s.pump;
        auto r = walkoff_from_dispersion(s, Omega, Omega, Omega, phi0);
        return std::abs(r.N_p - exact);
    };

    const double e1 = err_at(17);
    const double e2 = err_at(33);
    const double ratio = e1 / e2;
    CHECK(ratio > 3.0);  // second order: ~4 per halving
    CHECK(ratio < 5.5);
}

TEST_CASE("requests outside the table throw OutOfGridRange") {
    auto flat = [](double, double) { return 1.8; };
    DispersionSamples s;
    s.pump = tabulate(flat, 5e15, 6e15, 5, 0.5, 0.9, 5);
    s.signal = s.pump;
    s.idler = s.pump;
    CHECK_THROWS_AS(walkoff_from_dispersion(s, 4.9e15, 5.5e15, 5.5e15, 0.7), OutOfGridRange);
    CHECK_THROWS_AS(walkoff_from_dispersion(s, 5.5e15, 5.5e15, 5.5e15, 1.2), OutOfGridRange);
}

TEST_CASE("tables below 3 points per axis are rejected") {
    DispersionTable t;
    t.omega = {1.0, 2.0};
    t.phi = {0.1, 0.2, 0.3};
    t.n = {1, 1, 1, 1, 1, 1};
    DispersionSamples s;
    s.pump = t;
    s.signal = t;
    s.idler = t;
    CHECK_THROWS_AS(walkoff_from_dispersion(s, 1.5, 1.5, 1.5, 0.2), std::invalid_argument);
}
