#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types for parametric-downconversion coupling calculations.
//
// Unit conventions used throughout the library:
//   lengths        micrometers
//   angles         radians
//   wavenumbers    rad/um   (K = n(Omega,phi)*Omega/c)
//   walk-off terms rad/um   (N = (Omega/c) dn/dphi at the phase-matching angle)
//   k_fresnel      1/um^2   (k = pi/(lambda_s d), free-space kernel parameter)
//
// The longitudinal variable is u = tau/D in [0, L]; with this substitution the
// type-I degenerate case D = 0 is regular and D drops out of every efficiency.

namespace pdc {

struct PhaseMatchConfig {
    double K_p = 0.0;      // pump wavenumber magnitude, rad/um
    double K_s = 0.0;      // signal wavenumber magnitude, rad/um
    double K_i = 0.0;      // idler wavenumber magnitude, rad/um
    double N_p = 0.0;      // pump angular-dispersion walk-off, rad/um
    double N_s = 0.0;      // signal angular-dispersion walk-off, rad/um
    double D = 0.0;        // signal-idler differential inverse group velocity
    double theta_i = 0.0;  // idler central emission angle, rad
    double theta_s = 0.0;  // signal central emission angle, rad
    double L = 0.0;        // crystal length, um

    // Walk-off combinations every closed form depends on. Both must be > 0
    // on validated input.
    double walkoff_i() const { return -N_p + N_s + K_p * theta_i; }
    double walkoff_s() const { return N_p - N_s + K_p * theta_s; }
};

struct BeamGeometry {
    double w_p = 0.0;   // pump waist at crystal, um
    double w_o1 = 0.0;  // preparation (arm 3, idler) mode waist at crystal, um
    double w_o2 = 0.0;  // collection (arm 4, signal) mode waist at crystal, um
    double M_3 = 1.0;   // imaging magnification, arm 3 (cancels in all ratios)
    double M_4 = 1.0;   // imaging magnification, arm 4
    std::optional<double> w_ap;       // Gaussian aperture width, um (eps_P only)
    std::optional<double> k_fresnel;  // free-space kernel parameter, 1/um^2
};

enum class EfficiencyKind {
    chi_M,       // single-mode matching, C34/sqrt(C3 C4)
    chi_P3,      // single-mode preparation, C34/C3
    chi_P4,      // single-mode preparation, C34/C4
    eta_M,       // multi-mode matching
    eta_P3,      // multi-mode preparation
    eta_P4,
    eps_P,       // single-mode preparation + multi-mode collection
    singles_C3,  // heralding-arm singles rate, arbitrary units
};

enum class Regime { full_crystal, thin_crystal };

const char* to_string(EfficiencyKind kind);
const char* to_string(Regime regime);
std::optional<EfficiencyKind> efficiency_kind_from_string(const std::string& name);

struct EfficiencyResult {
    EfficiencyKind kind;
    double value = 0.0;
    Regime regime = Regime::full_crystal;
    std::optional<PhaseMatchConfig> config;  // absent for thin-crystal results
    BeamGeometry geometry;
    // Normalization corrections applied relative to the literal printed
    // formulas, e.g. the eta_P prefactor and the singles denominator fix.
    std::vector<std::string> notes;
    // Value of the literal formula whenever it differs from `value`.
    std::optional<double> literal_value;
};

// One figure-style sweep: abscissa strictly increasing, lists equal length.
struct ScanSeries {
    std::string abscissa_name;
    std::vector<double> abscissa;   // um
    std::vector<double> ordinate;
    PhaseMatchConfig fixed_config;
    BeamGeometry fixed_geometry;
};

// -------------------------------------------------------------------------
// Validation

enum class ValidationErrorCode {
    non_positive_waist,
    non_positive_walkoff,
    missing_aperture_params,
    non_positive_crystal_length,
    non_positive_wavenumber,
    zero_magnification,
    negative_angle_sum,
};

const char* to_string(ValidationErrorCode code);

struct Violation {
    ValidationErrorCode code;
    std::string message;
};

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

  private:
    std::vector<Violation> violations_;
};

// What a given evaluation needs from the geometry.
enum class Needs { efficiency, aperture };

// Checks every invariant; empty result means the inputs are usable as-is.
// Never clamps or repairs anything.
std::vector<Violation> check(const PhaseMatchConfig& config, const BeamGeometry& geom,
                             Needs needs = Needs::efficiency);

// Immutable bundle of inputs that passed validation.
struct Validated {
    PhaseMatchConfig config;
    BeamGeometry geometry;
};

// Returns the validated bundle or throws ValidationError listing every
// violated invariant.
Validated validate(const PhaseMatchConfig& config, const BeamGeometry& geom,
                   Needs needs = Needs::efficiency);

}  // namespace pdc
