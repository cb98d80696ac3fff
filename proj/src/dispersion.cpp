#include "pdc/dispersion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

namespace pdc {

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 3)
        throw std::invalid_argument(std::string(name) + " axis needs at least 3 points");
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (!(axis[i] > axis[i - 1]))
            throw std::invalid_argument(std::string(name) + " axis must be strictly increasing");
}

void check_table(const DispersionTable& t, const char* which) {
    check_axis(t.omega, (std::string(which) + " omega").c_str());
    check_axis(t.phi, (std::string(which) + " phi").c_str());
    if (t.n.size() != t.omega.size() * t.phi.size())
        throw std::invalid_argument(std::string(which) + " table size mismatch");
}

// Index of the leftmost point of the 3-point stencil bracketing x.
std::size_t stencil_start(const std::vector<double>& axis, double x, const char* name) {
    if (x < axis.front() || x > axis.back())
        throw OutOfGridRange(std::string(name) + " = " + std::to_string(x) +
                             " outside table range [" + std::to_string(axis.front()) + ", " +
                             std::to_string(axis.back()) + "]");
    auto it = std::upper_bound(axis.begin(), axis.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - axis.begin());
    // Center the stencil on the bracketing interval where possible.
    std::size_t i = hi > 1 ? hi - 2 : 0;
    return std::min(i, axis.size() - 3);
}

struct Quadratic {
    double value;
    double derivative;
};

// Lagrange quadratic through (x0,y0),(x1,y1),(x2,y2) evaluated at x.
Quadratic quad_interp(const std::array<double, 3>& xs, const std::array<double, 3>& ys,
                      double x) {
    const double d01 = xs[0] - xs[1], d02 = xs[0] - xs[2], d12 = xs[1] - xs[2];
    const double l0 = (x - xs[1]) * (x - xs[2]) / (d01 * d02);
    const double l1 = (x - xs[0]) * (x - xs[2]) / (-d01 * d12);
    const double l2 = (x - xs[0]) * (x - xs[1]) / (d02 * d12);
    const double g0 = (2.0 * x - xs[1] - xs[2]) / (d01 * d02);
    const double g1 = (2.0 * x - xs[0] - xs[2]) / (-d01 * d12);
    const double g2 = (2.0 * x - xs[0] - xs[1]) / (d02 * d12);
    return {ys[0] * l0 + ys[1] * l1 + ys[2] * l2, ys[0] * g0 + ys[1] * g1 + ys[2] * g2};
}

// n, dn/domega, dn/dphi at (omega, phi): quadratic in phi along three
// bracketing omega rows, then quadratic in omega through those values.
struct Point {
    double n;
    double dn_domega;
    double dn_dphi;
};

Point sample(const DispersionTable& t, double omega, double phi, const char* which) {
    check_table(t, which);
    const std::size_t io = stencil_start(t.omega, omega, (std::string(which) + " omega").c_str());
    const std::size_t ip = stencil_start(t.phi, phi, (std::string(which) + " phi").c_str());
    const std::size_t np = t.phi.size();

    std::array<double, 3> om{t.omega[io], t.omega[io + 1], t.omega[io + 2]};
    std::array<double, 3> ph{t.phi[ip], t.phi[ip + 1], t.phi[ip + 2]};
    std::array<double, 3> n_at_omega{};
    std::array<double, 3> dphi_at_omega{};
    for (std::size_t r = 0; r < 3; ++r) {
        std::array<double, 3> row{t.n[(io + r) * np + ip], t.n[(io + r) * np + ip + 1],
                                  t.n[(io + r) * np + ip + 2]};
        Quadratic q = quad_interp(ph, row, phi);
        n_at_omega[r] = q.value;
        dphi_at_omega[r] = q.derivative;
    }
    Point p;
    Quadratic qn = quad_interp(om, n_at_omega, omega);
    p.n = qn.value;
    p.dn_domega = qn.derivative;
    p.dn_dphi = quad_interp(om, dphi_at_omega, omega).value;
    return p;
}

}  // namespace

WalkoffResult walkoff_from_dispersion(const DispersionSamples& samples, double Omega_p,
                                      double Omega_s, double Omega_i, double phi_0) {
    constexpr double c = speed_of_light_um_per_s;
    const Point p = sample(samples.pump, Omega_p, phi_0, "pump");
    const Point s = sample(samples.signal, Omega_s, phi_0, "signal");
    const Point i = sample(samples.idler, Omega_i, phi_0, "idler");

    WalkoffResult out;
    out.K_p = p.n * Omega_p / c;
    out.K_s = s.n * Omega_s / c;
    out.K_i = i.n * Omega_i / c;
    out.N_p = (Omega_p / c) * p.dn_dphi;
    out.N_s = (Omega_s / c) * s.dn_dphi;
    // D = -d(n_i w_i / c)/dw + d(n_s w_s / c)/dw evaluated at the central
    // frequencies, expressed with time as optical path so it is
    // dimensionless: c * d(n w / c)/dw = n + w dn/dw.
    out.D = -(i.n + Omega_i * i.dn_domega) + (s.n + Omega_s * s.dn_domega);
    return out;
}

}  // namespace pdc
