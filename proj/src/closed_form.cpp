#include "pdc/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdc {

namespace special {

double erf(double x) { return std::erf(x); }

double erf_over_x(double x) {
    constexpr double two_over_sqrt_pi = 2.0 * std::numbers::inv_sqrtpi;
    const double x2 = x * x;
    if (std::abs(x) < erf_over_x_threshold) {
        // Maclaurin series through x^6; at the threshold the truncation is
        // below 1e-25 relative.
        return two_over_sqrt_pi * (1.0 - x2 / 3.0 + x2 * x2 / 10.0 - x2 * x2 * x2 / 42.0);
    }
    return std::erf(x) / x;
}

}  // namespace special

namespace {

// Erf(x) written as x * (Erf(x)/x); exact for normal arguments and free of
// 0/0 when several factors with tiny arguments are combined in a ratio.
double safe_erf(double x) { return x * special::erf_over_x(x); }

int check_arm(int arm) {
    if (arm != 3 && arm != 4) throw std::invalid_argument("arm must be 3 or 4");
    return arm;
}

// Swapping arms exchanges (w_o1, a_i) <-> (w_o2, a_s); S, B, A are invariant.
struct ArmView {
    double w_near;  // waist of the arm whose singles form the denominator
    double a_near;
};

ArmView arm_view(const AuxiliaryTerms& t, const BeamGeometry& g, int arm) {
    return arm == 3 ? ArmView{g.w_o1, t.a_i} : ArmView{g.w_o2, t.a_s};
}

struct ErfArgs {
    double num;  // L sqrt(2B)/(K_p sqrt(S))
    double d3;   // sqrt(2) L a_i/(K_p sqrt(w_o1^2+w_p^2))
    double d4;   // sqrt(2) L a_s/(K_p sqrt(w_o2^2+w_p^2))
};

ErfArgs erf_args(const PhaseMatchConfig& c, const BeamGeometry& g, const AuxiliaryTerms& t) {
    const double sqrt2 = std::numbers::sqrt2;
    ErfArgs a;
    a.num = c.L * std::sqrt(2.0 * t.B) / (c.K_p * std::sqrt(t.S));
    a.d3 = sqrt2 * c.L * t.a_i / (c.K_p * std::hypot(g.w_o1, g.w_p));
    a.d4 = sqrt2 * c.L * t.a_s / (c.K_p * std::hypot(g.w_o2, g.w_p));
    return a;
}

}  // namespace

AuxiliaryTerms auxiliary_terms(const PhaseMatchConfig& c, const BeamGeometry& g) {
    AuxiliaryTerms t;
    t.a_i = c.walkoff_i();
    t.a_s = c.walkoff_s();
    const double wp2 = g.w_p * g.w_p;
    const double w12 = g.w_o1 * g.w_o1;
    const double w22 = g.w_o2 * g.w_o2;
    t.S = w22 * wp2 + w12 * (w22 + wp2);
    const double theta_sum = c.theta_i + c.theta_s;
    t.B = t.a_s * t.a_s * w12 + t.a_i * t.a_i * w22 +
          c.K_p * c.K_p * theta_sum * theta_sum * wp2;
    t.A = t.a_i * t.a_s * std::hypot(g.w_o1, g.w_p) * std::hypot(g.w_o2, g.w_p);

    if (g.w_ap && g.k_fresnel) {
        const double w2 = *g.w_ap * *g.w_ap;
        const double k2 = *g.k_fresnel * *g.k_fresnel;
        const double q = w12 + wp2;
        t.B_prime = t.a_s * t.a_s * w12 * w12 * wp2 * k2 +
                    t.a_i * t.a_i * (q + k2 * w2 * w12 * wp2) +
                    c.K_p * c.K_p * k2 * w12 * wp2 * wp2 * theta_sum * theta_sum;
        t.C_prime = q * q + k2 * w12 * wp2 * (w2 * wp2 + w12 * w2 + w12 * wp2);
    }
    return t;
}

// --- single mode ------------------------------------------------------------

double chi_M_thin_value(const BeamGeometry& g) {
    const double wp2 = g.w_p * g.w_p;
    const double w12 = g.w_o1 * g.w_o1;
    const double w22 = g.w_o2 * g.w_o2;
    const double S = w22 * wp2 + w12 * (w22 + wp2);
    return 4.0 * wp2 * w12 * w22 * std::sqrt((w12 + wp2) * (w22 + wp2)) / (S * S);
}

double chi_P_thin_value(const BeamGeometry& g, int arm) {
    check_arm(arm);
    const double wp2 = g.w_p * g.w_p;
    const double w12 = g.w_o1 * g.w_o1;
    const double w22 = g.w_o2 * g.w_o2;
    const double S = w22 * wp2 + w12 * (w22 + wp2);
    const double near2 = arm == 3 ? w12 : w22;
    return 4.0 * wp2 * w12 * w22 * (near2 + wp2) / (S * S);
}

double chi_M_full_value(const PhaseMatchConfig& c, const BeamGeometry& g) {
    const AuxiliaryTerms t = auxiliary_terms(c, g);
    const ErfArgs a = erf_args(c, g, t);
    const double F_M = safe_erf(a.num) / std::sqrt(safe_erf(a.d3) * safe_erf(a.d4));
    const double w12 = g.w_o1 * g.w_o1, w22 = g.w_o2 * g.w_o2, wp2 = g.w_p * g.w_p;
    return F_M * 4.0 * w12 * w22 * wp2 * std::sqrt(t.A) / std::sqrt(t.S * t.S * t.S * t.B);
}

double chi_P_full_value(const PhaseMatchConfig& c, const BeamGeometry& g, int arm) {
    check_arm(arm);
    const AuxiliaryTerms t = auxiliary_terms(c, g);
    const ErfArgs a = erf_args(c, g, t);
    const ArmView v = arm_view(t, g, arm);
    const double F_P = safe_erf(a.num) / safe_erf(arm == 3 ? a.d3 : a.d4);
    const double w12 = g.w_o1 * g.w_o1, w22 = g.w_o2 * g.w_o2, wp2 = g.w_p * g.w_p;
    return F_P * 4.0 * v.a_near * w12 * w22 * wp2 * std::hypot(v.w_near, g.w_p) /
           std::sqrt(t.S * t.S * t.S * t.B);
}

// --- multi mode -------------------------------------------------------------

double eta_M_full_value(const PhaseMatchConfig& c, const BeamGeometry& g) {
    const AuxiliaryTerms t = auxiliary_terms(c, g);
    const ErfArgs a = erf_args(c, g, t);
    const double F_M = safe_erf(a.num) / std::sqrt(safe_erf(a.d3) * safe_erf(a.d4));
    return F_M * g.w_o1 * g.w_o2 * std::sqrt(t.A) / std::sqrt(t.S * t.B);
}

double eta_P_full_value(const PhaseMatchConfig& c, const BeamGeometry& g, int arm) {
    check_arm(arm);
    const AuxiliaryTerms t = auxiliary_terms(c, g);
    const ErfArgs a = erf_args(c, g, t);
    const ArmView v = arm_view(t, g, arm);
    const double w_far = arm == 3 ? g.w_o2 : g.w_o1;
    const double F_P = safe_erf(a.num) / safe_erf(arm == 3 ? a.d3 : a.d4);
    return F_P * v.a_near * w_far * w_far * std::hypot(v.w_near, g.w_p) /
           std::sqrt(t.S * t.B);
}

// Dimensionless L->0 limit of the full formula; the published thin-crystal
// expression carries an extra w_o1*w_o2 and violates the eta_M -> 1
// asymptote.
double eta_M_thin_value(const BeamGeometry& g) {
    const double wp2 = g.w_p * g.w_p;
    const double w12 = g.w_o1 * g.w_o1;
    const double w22 = g.w_o2 * g.w_o2;
    const double S = w22 * wp2 + w12 * (w22 + wp2);
    return g.w_o1 * g.w_o2 * std::sqrt((w12 + wp2) * (w22 + wp2)) / S;
}

double eta_P_thin_value(const BeamGeometry& g, int arm) {
    check_arm(arm);
    const double wp2 = g.w_p * g.w_p;
    const double w12 = g.w_o1 * g.w_o1;
    const double w22 = g.w_o2 * g.w_o2;
    const double S = w22 * wp2 + w12 * (w22 + wp2);
    const double near2 = arm == 3 ? w12 : w22;
    const double far2 = arm == 3 ? w22 : w12;
    return far2 * (near2 + wp2) / S;
}

double eta_M_thin_literal_value(const BeamGeometry& g) {
    return g.w_o1 * g.w_o2 * eta_M_thin_value(g);
}

double eta_P_thin_literal_value(const BeamGeometry& g, int arm) {
    const double near = arm == 3 ? g.w_o1 : g.w_o2;
    return near * near * eta_P_thin_value(g, arm);
}

// --- single-mode preparation, multi-mode collection -------------------------

double eps_P_thin_value(const BeamGeometry& g) {
    const double wp2 = g.w_p * g.w_p;
    const double w12 = g.w_o1 * g.w_o1;
    const double w2 = *g.w_ap * *g.w_ap;
    const double k2 = *g.k_fresnel * *g.k_fresnel;
    const double q = w12 + wp2;
    const double num = k2 * w2 * w12 * wp2 * q;
    const double den = q * q + k2 * w12 * wp2 * (w2 * wp2 + w12 * w2 + w12 * wp2);
    return num / den;
}

double eps_P_full_value(const PhaseMatchConfig& c, const BeamGeometry& g) {
    const AuxiliaryTerms t = auxiliary_terms(c, g);
    const double w2 = *g.w_ap * *g.w_ap;
    const double k2 = *g.k_fresnel * *g.k_fresnel;
    const double num_arg = c.L * std::sqrt(2.0 * t.B_prime) / (c.K_p * std::sqrt(t.C_prime));
    const double den_arg =
        std::numbers::sqrt2 * c.L * t.a_i / (c.K_p * std::hypot(g.w_o1, g.w_p));
    const double F_P = safe_erf(num_arg) / safe_erf(den_arg);
    return F_P * t.a_i * k2 * w2 * g.w_o1 * g.w_o1 * g.w_p * g.w_p *
           std::hypot(g.w_o1, g.w_p) / std::sqrt(t.C_prime * t.B_prime);
}

// --- singles rate -----------------------------------------------------------

// As published the Erf argument carries L in numerator and denominator,
// which would make the rate independent of crystal length; the denominator
// L is dropped, matching the arm-3 singles Erf of the coincidence formulas.
double singles_C3_value(const PhaseMatchConfig& c, double w_p, double w_o) {
    const double a_i = c.walkoff_i();
    const double hyp = std::hypot(w_o, w_p);
    const double arg = std::numbers::sqrt2 * c.L * a_i / (c.K_p * hyp);
    return c.K_p * special::erf(arg) / (std::sqrt(2.0 * std::numbers::pi) * a_i * hyp);
}

// --- result wrappers ---------------------------------------------------------

namespace {

EfficiencyResult make_full(EfficiencyKind kind, const Validated& v, double value) {
    EfficiencyResult r;
    r.kind = kind;
    r.value = value;
    r.regime = Regime::full_crystal;
    r.config = v.config;
    r.geometry = v.geometry;
    return r;
}

EfficiencyResult make_thin(EfficiencyKind kind, const BeamGeometry& g, double value) {
    EfficiencyResult r;
    r.kind = kind;
    r.value = value;
    r.regime = Regime::thin_crystal;
    r.geometry = g;
    return r;
}

// Thin ops take no crystal parameters; validate the geometry with a dummy
// config that satisfies the crystal invariants.
BeamGeometry validated_geometry(const BeamGeometry& g, Needs needs) {
    PhaseMatchConfig dummy;
    dummy.K_p = dummy.K_s = dummy.K_i = 1.0;
    dummy.theta_i = dummy.theta_s = 0.1;
    dummy.L = 1.0;
    return validate(dummy, g, needs).geometry;
}

const char* eta_P_note =
    "eta_P normalized to sup = 1; literal formula carries prefactor 4";

}  // namespace

EfficiencyResult chi_M_full(const PhaseMatchConfig& config, const BeamGeometry& geom) {
    auto v = validate(config, geom);
    return make_full(EfficiencyKind::chi_M, v, chi_M_full_value(v.config, v.geometry));
}

EfficiencyResult chi_P_full(const PhaseMatchConfig& config, const BeamGeometry& geom, int arm) {
    check_arm(arm);
    auto v = validate(config, geom);
    return make_full(arm == 3 ? EfficiencyKind::chi_P3 : EfficiencyKind::chi_P4, v,
                     chi_P_full_value(v.config, v.geometry, arm));
}

EfficiencyResult chi_M_thin(const BeamGeometry& geom) {
    auto g = validated_geometry(geom, Needs::efficiency);
    return make_thin(EfficiencyKind::chi_M, g, chi_M_thin_value(g));
}

EfficiencyResult chi_P_thin(const BeamGeometry& geom, int arm) {
    check_arm(arm);
    auto g = validated_geometry(geom, Needs::efficiency);
    return make_thin(arm == 3 ? EfficiencyKind::chi_P3 : EfficiencyKind::chi_P4, g,
                     chi_P_thin_value(g, arm));
}

EfficiencyResult eta_M_full(const PhaseMatchConfig& config, const BeamGeometry& geom) {
    auto v = validate(config, geom);
    return make_full(EfficiencyKind::eta_M, v, eta_M_full_value(v.config, v.geometry));
}

EfficiencyResult eta_P_full(const PhaseMatchConfig& config, const BeamGeometry& geom, int arm,
                            bool as_printed) {
    check_arm(arm);
    auto v = validate(config, geom);
    const double normalized = eta_P_full_value(v.config, v.geometry, arm);
    auto r = make_full(arm == 3 ? EfficiencyKind::eta_P3 : EfficiencyKind::eta_P4, v,
                       as_printed ? eta_P_literal_scale * normalized : normalized);
    r.notes.push_back(eta_P_note);
    r.literal_value = eta_P_literal_scale * normalized;
    return r;
}

EfficiencyResult eta_M_thin(const BeamGeometry& geom, bool as_printed) {
    auto g = validated_geometry(geom, Needs::efficiency);
    auto r = make_thin(EfficiencyKind::eta_M, g,
                       as_printed ? eta_M_thin_literal_value(g) : eta_M_thin_value(g));
    r.notes.push_back("thin eta_M is the dimensionless L->0 limit of the full formula");
    r.literal_value = eta_M_thin_literal_value(g);
    return r;
}

EfficiencyResult eta_P_thin(const BeamGeometry& geom, int arm, bool as_printed) {
    check_arm(arm);
    auto g = validated_geometry(geom, Needs::efficiency);
    auto r = make_thin(arm == 3 ? EfficiencyKind::eta_P3 : EfficiencyKind::eta_P4, g,
                       as_printed ? eta_P_thin_literal_value(g, arm) : eta_P_thin_value(g, arm));
    r.notes.push_back("thin eta_P is the dimensionless L->0 limit, normalized to sup = 1");
    r.literal_value = eta_P_thin_literal_value(g, arm);
    return r;
}

EfficiencyResult eps_P_full(const PhaseMatchConfig& config, const BeamGeometry& geom) {
    auto v = validate(config, geom, Needs::aperture);
    return make_full(EfficiencyKind::eps_P, v, eps_P_full_value(v.config, v.geometry));
}

EfficiencyResult eps_P_thin(const BeamGeometry& geom) {
    auto g = validated_geometry(geom, Needs::aperture);
    return make_thin(EfficiencyKind::eps_P, g, eps_P_thin_value(g));
}

EfficiencyResult singles_C3(const PhaseMatchConfig& config, double w_p, double w_o) {
    BeamGeometry g;
    g.w_p = w_p;
    g.w_o1 = w_o;
    g.w_o2 = w_o;
    auto v = validate(config, g);
    auto r = make_full(EfficiencyKind::singles_C3, v,
                       singles_C3_value(v.config, w_p, w_o));
    r.notes.push_back("spurious crystal-length factor removed from the Erf denominator");
    r.notes.push_back("arbitrary units; comparisons are shape-based");
    return r;
}

EfficiencyResult evaluate(EfficiencyKind kind, Regime regime, const PhaseMatchConfig& config,
                          const BeamGeometry& geom) {
    const bool thin = regime == Regime::thin_crystal;
    switch (kind) {
        case EfficiencyKind::chi_M:
            return thin ? chi_M_thin(geom) : chi_M_full(config, geom);
        case EfficiencyKind::chi_P3:
            return thin ? chi_P_thin(geom, 3) : chi_P_full(config, geom, 3);
        case EfficiencyKind::chi_P4:
            return thin ? chi_P_thin(geom, 4) : chi_P_full(config, geom, 4);
        case EfficiencyKind::eta_M:
            return thin ? eta_M_thin(geom) : eta_M_full(config, geom);
        case EfficiencyKind::eta_P3:
            return thin ? eta_P_thin(geom, 3) : eta_P_full(config, geom, 3);
        case EfficiencyKind::eta_P4:
            return thin ? eta_P_thin(geom, 4) : eta_P_full(config, geom, 4);
        case EfficiencyKind::eps_P:
            return thin ? eps_P_thin(geom) : eps_P_full(config, geom);
        case EfficiencyKind::singles_C3:
            if (thin)
                throw std::invalid_argument("singles_C3 has no thin-crystal regime");
            return singles_C3(config, geom.w_p, geom.w_o1);
    }
    throw std::invalid_argument("unknown efficiency kind");
}

}  // namespace pdc
