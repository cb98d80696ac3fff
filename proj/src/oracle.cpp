#include "pdc/oracle.hpp"

#include "pdc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

namespace pdc {

void QuadratureSpec::validate() const {
    if (n_longitudinal < 8 || n_transverse < 8)
        throw std::invalid_argument("quadrature rule sizes must be >= 8");
    if (transverse_cutoff < 4.0)
        throw std::invalid_argument("transverse cutoff must be >= 4");
}

QuadratureSpec QuadratureSpec::doubled() const {
    QuadratureSpec d = *this;
    d.n_longitudinal *= 2;
    d.n_transverse *= 2;
    return d;
}

FieldPoint constrained_point(double x1, double y1, double u, const PhaseMatchConfig& config) {
    FieldPoint p;
    p.x1 = x1;
    p.y1 = y1;
    p.u = u;
    p.x2 = x1;
    p.y2 = y1 + (config.theta_i + config.theta_s) * u;
    return p;
}

std::complex<double> biphoton_amplitude(const FieldPoint& p, const PhaseMatchConfig& c,
                                        const BeamGeometry& g, bool include_phase) {
    if (p.u < 0.0 || p.u > c.L) return {0.0, 0.0};
    const double nu = c.N_p - c.N_s;
    const double wp2 = g.w_p * g.w_p;
    const double yi = p.y1 + c.theta_i * p.u;
    // Sum of the printed exponents of the field. The tau^2 term needs K_p^2
    // in the denominator (the published expression is short one K_p, which
    // the closed forms themselves require); the three terms then complete
    // the square of a walk-off-displaced pump Gaussian.
    const double expo = -nu * nu * p.u * p.u / (wp2 * c.K_p * c.K_p) +
                        2.0 * nu * p.u * yi / (wp2 * c.K_p) -
                        (p.x1 * p.x1 + yi * yi) / wp2;
    const double mag = std::exp(expo);
    if (!include_phase) return {mag, 0.0};
    const double phase = -(c.K_i * c.theta_i * c.theta_i + c.K_s * c.theta_s * c.theta_i) * p.u;
    return std::polar(mag, phase);
}

namespace {

constexpr double pi = std::numbers::pi;

double pump_power(const BeamGeometry& g) { return pi * g.w_p * g.w_p / 2.0; }

// Placement data for one transverse axis: the integrand is a product of
// Gaussians exp(-a_j (t - c_j)^2) (plus smooth factors); nodes go on an
// interval of half-width cutoff/sqrt(sum a_j) about the weighted center.
struct AxisWindow {
    double center = 0.0;
    double halfwidth = 0.0;
};

AxisWindow axis_window(const std::vector<double>& decay, const std::vector<double>& centers,
                       double cutoff) {
    double asum = 0.0, csum = 0.0;
    for (std::size_t i = 0; i < decay.size(); ++i) {
        asum += decay[i];
        csum += decay[i] * centers[i];
    }
    return {csum / asum, cutoff / std::sqrt(asum)};
}

// Truncation of the u-domain by a coarse pre-scan of the transverse
// integral: keeps the Gauss-Legendre rule resolving the decaying integrand
// instead of spending nodes where it is numerically zero.
double truncate_u_domain(const std::function<double(double)>& integrand_scale, double L) {
    constexpr int n_scan = 33;
    std::vector<double> v(n_scan);
    double vmax = 0.0;
    for (int k = 0; k < n_scan; ++k) {
        v[k] = std::abs(integrand_scale(L * k / (n_scan - 1)));
        vmax = std::max(vmax, v[k]);
    }
    if (vmax == 0.0) return L;
    int cut = n_scan - 1;
    while (cut > 1 && v[cut] < 1e-16 * vmax && v[cut - 1] < 1e-16 * vmax) --cut;
    cut = std::min(cut + 1, n_scan - 1);
    return L * cut / (n_scan - 1);
}

// Integrates f over u in [0, L] with pre-scan truncation.
double integrate_u(const std::function<double(double)>& f, double L, const GaussRule& base) {
    const double u_hi = truncate_u_domain(f, L);
    const MappedRule rule = map_to_interval(base, 0.0, u_hi);
    KahanSum sum;
    for (std::size_t k = 0; k < rule.x.size(); ++k) sum.add(rule.w[k] * f(rule.x[k]));
    return sum.value();
}

struct Velocities {
    double g;  // pump-center drift a_i/K_p in idler coordinates, rad
    double b;  // signal-coordinate shift theta_i + theta_s, rad
};

Velocities velocities(const PhaseMatchConfig& c) {
    return {c.walkoff_i() / c.K_p, c.theta_i + c.theta_s};
}

// ---------------------------------------------------------------------------
// Single-mode integrals (normalized guided modes, perfect imaging)

double mode_norm_sq(double w_o) { return (2.0 / pi) / (w_o * w_o); }

}  // namespace

double coincidence_single_mode(const PhaseMatchConfig& c, const BeamGeometry& g,
                               const QuadratureSpec& spec) {
    spec.validate();
    const Velocities v = velocities(c);
    const double w12 = g.w_o1 * g.w_o1, w22 = g.w_o2 * g.w_o2, wp2 = g.w_p * g.w_p;
    const GaussRule base_t = gauss_legendre(spec.n_transverse);
    const GaussRule base_u = gauss_legendre(spec.n_longitudinal);

    const std::vector<double> decay{1.0 / wp2, 1.0 / w12, 1.0 / w22};
    const AxisWindow wx = axis_window(decay, {0.0, 0.0, 0.0}, spec.transverse_cutoff);
    const MappedRule rx = map_to_interval(base_t, -wx.halfwidth, wx.halfwidth);

    auto transverse = [&](double u) {
        const AxisWindow wy =
            axis_window(decay, {-v.g * u, 0.0, -v.b * u}, spec.transverse_cutoff);
        const MappedRule ry = map_to_interval(base_t, wy.center - wy.halfwidth,
                                              wy.center + wy.halfwidth);
        KahanSum re, im;
        for (std::size_t i = 0; i < rx.x.size(); ++i) {
            const double x = rx.x[i];
            for (std::size_t j = 0; j < ry.x.size(); ++j) {
                const double y = ry.x[j];
                const FieldPoint p = constrained_point(x, y, u, c);
                const std::complex<double> amp =
                    biphoton_amplitude(p, c, g, spec.include_pure_phase);
                const double modes = std::exp(-(p.x1 * p.x1 + p.y1 * p.y1) / w12 -
                                              (p.x2 * p.x2 + p.y2 * p.y2) / w22);
                const double w = rx.w[i] * ry.w[j];
                re.add(w * modes * amp.real());
                im.add(w * modes * amp.imag());
            }
        }
        return std::norm(std::complex<double>(re.value(), im.value()));
    };

    const double integral = integrate_u(transverse, c.L, base_u);
    return mode_norm_sq(g.w_o1) * mode_norm_sq(g.w_o2) * integral / pump_power(g);
}

double singles_single_mode(const PhaseMatchConfig& c, const BeamGeometry& g,
                           const QuadratureSpec& spec, int arm) {
    if (arm != 3 && arm != 4) throw std::invalid_argument("arm must be 3 or 4");
    spec.validate();
    const Velocities v = velocities(c);
    const double w_o = arm == 3 ? g.w_o1 : g.w_o2;
    const double wo2 = w_o * w_o, wp2 = g.w_p * g.w_p;
    const GaussRule base_t = gauss_legendre(spec.n_transverse);
    const GaussRule base_u = gauss_legendre(spec.n_longitudinal);

    // The uncollected coordinate is integrated freely; at fixed u the shift
    // between idler and signal coordinates has unit Jacobian, so both arms
    // reduce to a 2-axis integral of |field * mode|^2 in idler coordinates,
    // with the arm-4 mode displaced by (theta_i + theta_s) u.
    const std::vector<double> decay{2.0 / wp2, 2.0 / wo2};
    const AxisWindow wx = axis_window(decay, {0.0, 0.0}, spec.transverse_cutoff);
    const MappedRule rx = map_to_interval(base_t, -wx.halfwidth, wx.halfwidth);

    auto transverse = [&](double u) {
        const double mode_center = arm == 3 ? 0.0 : -v.b * u;
        const AxisWindow wy =
            axis_window(decay, {-v.g * u, mode_center}, spec.transverse_cutoff);
        const MappedRule ry = map_to_interval(base_t, wy.center - wy.halfwidth,
                                              wy.center + wy.halfwidth);
        KahanSum sum;
        for (std::size_t i = 0; i < rx.x.size(); ++i) {
            const double x = rx.x[i];
            for (std::size_t j = 0; j < ry.x.size(); ++j) {
                const double y = ry.x[j];
                const FieldPoint p = constrained_point(x, y, u, c);
                const std::complex<double> amp =
                    biphoton_amplitude(p, c, g, spec.include_pure_phase);
                const double xm = arm == 3 ? p.x1 : p.x2;
                const double ym = arm == 3 ? p.y1 : p.y2;
                const double mode = std::exp(-(xm * xm + ym * ym) / wo2);
                sum.add(rx.w[i] * ry.w[j] * std::norm(amp * mode));
            }
        }
        return sum.value();
    };

    const double integral = integrate_u(transverse, c.L, base_u);
    return mode_norm_sq(w_o) * integral / pump_power(g);
}

namespace {

// Shared core of the multimode integrals: integrates
// |field|^2 * prod(selected transmissions) over the transverse plane and u.
double multimode_integral(const PhaseMatchConfig& c, const BeamGeometry& g,
                          const QuadratureSpec& spec, bool with_T3, bool with_T4) {
    spec.validate();
    const Velocities v = velocities(c);
    const double w12 = g.w_o1 * g.w_o1, w22 = g.w_o2 * g.w_o2, wp2 = g.w_p * g.w_p;
    const GaussRule base_t = gauss_legendre(spec.n_transverse);
    const GaussRule base_u = gauss_legendre(spec.n_longitudinal);

    std::vector<double> decay{2.0 / wp2};
    if (with_T3) decay.push_back(2.0 / w12);
    if (with_T4) decay.push_back(2.0 / w22);
    std::vector<double> zeros(decay.size(), 0.0);
    const AxisWindow wx = axis_window(decay, zeros, spec.transverse_cutoff);
    const MappedRule rx = map_to_interval(base_t, -wx.halfwidth, wx.halfwidth);

    auto transverse = [&](double u) {
        std::vector<double> centers{-v.g * u};
        if (with_T3) centers.push_back(0.0);
        if (with_T4) centers.push_back(-v.b * u);
        const AxisWindow wy = axis_window(decay, centers, spec.transverse_cutoff);
        const MappedRule ry = map_to_interval(base_t, wy.center - wy.halfwidth,
                                              wy.center + wy.halfwidth);
        KahanSum sum;
        for (std::size_t i = 0; i < rx.x.size(); ++i) {
            for (std::size_t j = 0; j < ry.x.size(); ++j) {
                const FieldPoint p = constrained_point(rx.x[i], ry.x[j], u, c);
                const std::complex<double> amp =
                    biphoton_amplitude(p, c, g, spec.include_pure_phase);
                double t = std::norm(amp);
                if (with_T3)
                    t *= std::exp(-2.0 * (p.x1 * p.x1 + p.y1 * p.y1) / w12);
                if (with_T4)
                    t *= std::exp(-2.0 * (p.x2 * p.x2 + p.y2 * p.y2) / w22);
                sum.add(rx.w[i] * ry.w[j] * t);
            }
        }
        return sum.value();
    };

    return integrate_u(transverse, c.L, base_u) / pump_power(g);
}

}  // namespace

double coincidence_multimode(const PhaseMatchConfig& c, const BeamGeometry& g,
                             const QuadratureSpec& spec) {
    return multimode_integral(c, g, spec, true, true);
}

double singles_multimode(const PhaseMatchConfig& c, const BeamGeometry& g,
                         const QuadratureSpec& spec, int arm) {
    if (arm != 3 && arm != 4) throw std::invalid_argument("arm must be 3 or 4");
    return multimode_integral(c, g, spec, arm == 3, arm == 4);
}

double coincidence_mixed(const PhaseMatchConfig& c, const BeamGeometry& g,
                         const QuadratureSpec& spec) {
    spec.validate();
    if (!g.w_ap || !g.k_fresnel)
        throw ValidationError({{ValidationErrorCode::missing_aperture_params,
                                "coincidence_mixed requires w_ap and k_fresnel"}});
    const Velocities v = velocities(c);
    const double k = *g.k_fresnel;
    const double wap2 = *g.w_ap * *g.w_ap;
    const double wp2 = g.w_p * g.w_p, w12 = g.w_o1 * g.w_o1;
    const double cutoff = spec.transverse_cutoff;

    // Inner (rho_1) envelope: pump times preparation mode.
    const double alpha0 = 1.0 / wp2 + 1.0 / w12;
    const double sig_in = 1.0 / std::sqrt(alpha0);
    const double h_in = cutoff * sig_in;

    // Outer (rho_4) window: aperture transmission times the free-space image
    // of the source, whose intensity decays like exp[-2 k^2 alpha0 /
    // (alpha0^2 + k^2) * rho^2]. Used for node placement only.
    const double a_img = 2.0 * k * k * alpha0 / (alpha0 * alpha0 + k * k);
    const double sig_out = 1.0 / std::sqrt(a_img + 2.0 / wap2);
    const double h_out = cutoff * sig_out;

    // The Fresnel kernel oscillates across the inner window; enlarge the
    // inner rule until the worst-case phase span is resolved.
    const double off_in_max = std::abs(v.g) * c.L * (w12 / (wp2 + w12));
    const double off_out_max = std::abs(v.b) * c.L + off_in_max;
    const double slope = 2.0 * k * (h_in + off_in_max + h_out + off_out_max);
    const std::size_t n_in =
        spec.n_transverse + static_cast<std::size_t>(std::ceil(slope * h_in));

    const GaussRule base_in = gauss_legendre(n_in);
    const GaussRule base_out = gauss_legendre(spec.n_transverse);
    const GaussRule base_u = gauss_legendre(spec.n_longitudinal);

    const MappedRule rxi = map_to_interval(base_in, -h_in, h_in);
    const MappedRule rxo = map_to_interval(base_out, -h_out, h_out);

    // The field, mode, kernel and aperture all factor across the two
    // transverse axes, so the 2D aperture integral of |J|^2 is the product
    // of per-axis sums. The field slice along y at x1 = 0 is exactly the
    // y factor; the x factor carries no u dependence and is the u = 0,
    // y1 = 0 slice.
    auto aperture_sum = [&](const MappedRule& inner, const MappedRule& outer, double u,
                            bool y_axis) {
        KahanSum total;
        for (std::size_t m = 0; m < outer.x.size(); ++m) {
            const double r4 = outer.x[m];
            std::complex<double> j{0.0, 0.0};
            for (std::size_t i = 0; i < inner.x.size(); ++i) {
                const double r1 = inner.x[i];
                const FieldPoint p = y_axis ? constrained_point(0.0, r1, u, c)
                                            : constrained_point(r1, 0.0, u, c);
                const std::complex<double> amp =
                    biphoton_amplitude(p, c, g, spec.include_pure_phase);
                const double mode = y_axis ? std::exp(-p.y1 * p.y1 / w12)
                                           : std::exp(-p.x1 * p.x1 / w12);
                const double r2 = y_axis ? p.y2 : p.x2;
                const double d = r2 - r4;
                j += inner.w[i] * amp * mode * std::polar(1.0, -k * d * d);
            }
            total.add(outer.w[m] * std::exp(-2.0 * r4 * r4 / wap2) * std::norm(j));
        }
        return total.value();
    };

    const double sum_x = aperture_sum(rxi, rxo, 0.0, false);

    auto transverse = [&](double u) {
        const double mu_in = -(v.g * u / wp2) / alpha0;
        const MappedRule ryi = map_to_interval(base_in, mu_in - h_in, mu_in + h_in);
        const double mu_out = mu_in + v.b * u;
        const MappedRule ryo = map_to_interval(
            base_out, std::min(0.0, mu_out) - h_out, std::max(0.0, mu_out) + h_out);
        return sum_x * aperture_sum(ryi, ryo, u, true);
    };

    const double integral = integrate_u(transverse, c.L, base_u);
    // (k/pi)^2: modulus squared of the normalized free-space kernel
    // prefactor, both axes.
    return (k / pi) * (k / pi) * mode_norm_sq(g.w_o1) * integral / pump_power(g);
}

namespace {

double oracle_value(EfficiencyKind kind, const PhaseMatchConfig& c, const BeamGeometry& g,
                    const QuadratureSpec& spec) {
    switch (kind) {
        case EfficiencyKind::chi_M:
            return coincidence_single_mode(c, g, spec) /
                   std::sqrt(singles_single_mode(c, g, spec, 3) *
                             singles_single_mode(c, g, spec, 4));
        case EfficiencyKind::chi_P3:
            return coincidence_single_mode(c, g, spec) / singles_single_mode(c, g, spec, 3);
        case EfficiencyKind::chi_P4:
            return coincidence_single_mode(c, g, spec) / singles_single_mode(c, g, spec, 4);
        case EfficiencyKind::eta_M:
            return coincidence_multimode(c, g, spec) /
                   std::sqrt(singles_multimode(c, g, spec, 3) *
                             singles_multimode(c, g, spec, 4));
        case EfficiencyKind::eta_P3:
            return coincidence_multimode(c, g, spec) / singles_multimode(c, g, spec, 3);
        case EfficiencyKind::eta_P4:
            return coincidence_multimode(c, g, spec) / singles_multimode(c, g, spec, 4);
        case EfficiencyKind::eps_P:
            return coincidence_mixed(c, g, spec) / singles_single_mode(c, g, spec, 3);
        case EfficiencyKind::singles_C3:
            return singles_single_mode(c, g, spec, 3);
    }
    throw std::invalid_argument("unknown efficiency kind");
}

}  // namespace

EfficiencyResult oracle_efficiency(EfficiencyKind kind, const PhaseMatchConfig& config,
                                   const BeamGeometry& geom, const QuadratureSpec& spec,
                                   bool verify) {
    const Needs needs =
        kind == EfficiencyKind::eps_P ? Needs::aperture : Needs::efficiency;
    auto v = validate(config, geom, needs);
    spec.validate();

    const double value = oracle_value(kind, v.config, v.geometry, spec);
    if (verify) {
        const double refined = oracle_value(kind, v.config, v.geometry, spec.doubled());
        const double denom = std::max(std::abs(refined), 1e-300);
        if (std::abs(value - refined) / denom > oracle_convergence_tol) {
            std::ostringstream os;
            os << "quadrature not converged for " << to_string(kind) << ": " << value
               << " vs " << refined << " at doubled rule sizes";
            throw QuadratureNotConverged(os.str());
        }
    }

    EfficiencyResult r;
    r.kind = kind;
    r.value = value;
    r.regime = Regime::full_crystal;
    r.config = v.config;
    r.geometry = v.geometry;
    r.notes.push_back("quadrature oracle");
    return r;
}

}  // namespace pdc
