#pragma once

#include "pdc/types.hpp"

namespace pdc {

// Analytic coupling-efficiency formulas, full-crystal and thin-crystal.
//
// All full-crystal expressions share the structure
//     (geometry prefactor) * F,   F = Erf[n] / (product of arm Erf factors),
// where every Erf argument is proportional to L. Each Erf factor is
// evaluated as x * erf_over_x(x) so the F ratios stay finite and accurate
// down to L -> 0.

namespace special {

// Standard error function; absolute error <= 1e-12 on the real line.
double erf(double x);

// Erf(x)/x, continued by its Maclaurin series 2/sqrt(pi) * (1 - x^2/3 + ...)
// for |x| below the branch threshold. Both branches agree to better than
// 1e-10 at the crossover.
double erf_over_x(double x);

inline constexpr double erf_over_x_threshold = 1e-4;

}  // namespace special

// Intermediate scalars shared by the closed forms. S is the recurring
// denominator combination w_o2^2 w_p^2 + w_o1^2 (w_o2^2 + w_p^2) in um^4.
struct AuxiliaryTerms {
    double a_i = 0.0;      // -N_p + N_s + K_p theta_i, rad/um
    double a_s = 0.0;      // N_p - N_s + K_p theta_s, rad/um
    double S = 0.0;        // um^4
    double B = 0.0;        // rad^2 (dimensionless in these units)
    double A = 0.0;        // a_i a_s sqrt(w_o1^2+w_p^2) sqrt(w_o2^2+w_p^2)
    double B_prime = 0.0;  // eps_P denominator combination (needs aperture)
    double C_prime = 0.0;  // um^4
};

AuxiliaryTerms auxiliary_terms(const PhaseMatchConfig& config, const BeamGeometry& geom);

// --- value cores (plain doubles; inputs assumed validated) -----------------

double chi_M_full_value(const PhaseMatchConfig& config, const BeamGeometry& geom);
double chi_P_full_value(const PhaseMatchConfig& config, const BeamGeometry& geom, int arm);
double chi_M_thin_value(const BeamGeometry& geom);
double chi_P_thin_value(const BeamGeometry& geom, int arm);

double eta_M_full_value(const PhaseMatchConfig& config, const BeamGeometry& geom);
// Normalized so that sup eta_P = 1; the literal formula carries an extra
// factor 4 (see eta_P_literal_scale).
double eta_P_full_value(const PhaseMatchConfig& config, const BeamGeometry& geom, int arm);
double eta_M_thin_value(const BeamGeometry& geom);
double eta_P_thin_value(const BeamGeometry& geom, int arm);

double eps_P_full_value(const PhaseMatchConfig& config, const BeamGeometry& geom);
double eps_P_thin_value(const BeamGeometry& geom);

// Heralding-arm singles rate, arbitrary units. w_o is the preparation-mode
// waist; the crystal-independent pump waist enters through w_p.
double singles_C3_value(const PhaseMatchConfig& config, double w_p, double w_o);

// Literal-formula audit values. The published eta_P expression carries a
// prefactor 4 (its large-w_o2 asymptote is then 4 instead of 1); the
// published thin-crystal eta_M / eta_P expressions carry stray um^2 waist
// factors. These return the expressions exactly as printed.
inline constexpr double eta_P_literal_scale = 4.0;
double eta_M_thin_literal_value(const BeamGeometry& geom);
double eta_P_thin_literal_value(const BeamGeometry& geom, int arm);

// --- EfficiencyResult wrappers (validate, evaluate, annotate) --------------

EfficiencyResult chi_M_full(const PhaseMatchConfig& config, const BeamGeometry& geom);
EfficiencyResult chi_P_full(const PhaseMatchConfig& config, const BeamGeometry& geom, int arm);
EfficiencyResult chi_M_thin(const BeamGeometry& geom);
EfficiencyResult chi_P_thin(const BeamGeometry& geom, int arm);
EfficiencyResult eta_M_full(const PhaseMatchConfig& config, const BeamGeometry& geom);
EfficiencyResult eta_P_full(const PhaseMatchConfig& config, const BeamGeometry& geom, int arm,
                            bool as_printed = false);
EfficiencyResult eta_M_thin(const BeamGeometry& geom, bool as_printed = false);
EfficiencyResult eta_P_thin(const BeamGeometry& geom, int arm, bool as_printed = false);
EfficiencyResult eps_P_full(const PhaseMatchConfig& config, const BeamGeometry& geom);
EfficiencyResult eps_P_thin(const BeamGeometry& geom);
EfficiencyResult singles_C3(const PhaseMatchConfig& config, double w_p, double w_o);

// Dispatch by kind; singles_C3 uses geom.w_p and geom.w_o1 and has no thin
// regime.
EfficiencyResult evaluate(EfficiencyKind kind, Regime regime, const PhaseMatchConfig& config,
                          const BeamGeometry& geom);

}  // namespace pdc
