#include "pdc/types.hpp"

#include <cmath>
#include <sstream>

namespace pdc {

const char* to_string(EfficiencyKind kind) {
    switch (kind) {
        case EfficiencyKind::chi_M: return "chi_M";
        case EfficiencyKind::chi_P3: return "chi_P3";
        case EfficiencyKind::chi_P4: return "chi_P4";
        case EfficiencyKind::eta_M: return "eta_M";
        case EfficiencyKind::eta_P3: return "eta_P3";
        case EfficiencyKind::eta_P4: return "eta_P4";
        case EfficiencyKind::eps_P: return "eps_P";
        case EfficiencyKind::singles_C3: return "singles_C3";
    }
    return "?";
}

const char* to_string(Regime regime) {
    return regime == Regime::full_crystal ? "full" : "thin";
}

std::optional<EfficiencyKind> efficiency_kind_from_string(const std::string& name) {
    if (name == "chi_M") return EfficiencyKind::chi_M;
    if (name == "chi_P3") return EfficiencyKind::chi_P3;
    if (name == "chi_P4") return EfficiencyKind::chi_P4;
    if (name == "eta_M") return EfficiencyKind::eta_M;
    if (name == "eta_P3") return EfficiencyKind::eta_P3;
    if (name == "eta_P4") return EfficiencyKind::eta_P4;
    if (name == "eps_P") return EfficiencyKind::eps_P;
    if (name == "singles_C3") return EfficiencyKind::singles_C3;
    return std::nullopt;
}

const char* to_string(ValidationErrorCode code) {
    switch (code) {
        case ValidationErrorCode::non_positive_waist: return "NonPositiveWaist";
        case ValidationErrorCode::non_positive_walkoff: return "NonPositiveWalkoff";
        case ValidationErrorCode::missing_aperture_params: return "MissingApertureParams";
        case ValidationErrorCode::non_positive_crystal_length: return "NonPositiveCrystalLength";
        case ValidationErrorCode::non_positive_wavenumber: return "NonPositiveWavenumber";
        case ValidationErrorCode::zero_magnification: return "ZeroMagnification";
        case ValidationErrorCode::negative_angle_sum: return "NegativeAngleSum";
    }
    return "?";
}

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << "invalid parameters:";
    for (const auto& v : violations) os << "\n  [" << to_string(v.code) << "] " << v.message;
    return os.str();
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_messages(violations)), violations_(std::move(violations)) {}

std::vector<Violation> check(const PhaseMatchConfig& config, const BeamGeometry& geom,
                             Needs needs) {
    std::vector<Violation> out;
    auto fail = [&out](ValidationErrorCode code, const std::string& msg) {
        out.push_back({code, msg});
    };

    if (!finite_positive(config.L))
        fail(ValidationErrorCode::non_positive_crystal_length, "crystal length L must be > 0");
    if (!finite_positive(config.K_p) || !finite_positive(config.K_s) ||
        !finite_positive(config.K_i))
        fail(ValidationErrorCode::non_positive_wavenumber, "K_p, K_s, K_i must all be > 0");

    if (!finite_positive(geom.w_p))
        fail(ValidationErrorCode::non_positive_waist, "pump waist w_p must be > 0");
    if (!finite_positive(geom.w_o1))
        fail(ValidationErrorCode::non_positive_waist, "preparation waist w_o1 must be > 0");
    if (!finite_positive(geom.w_o2))
        fail(ValidationErrorCode::non_positive_waist, "collection waist w_o2 must be > 0");
    if (geom.M_3 == 0.0 || geom.M_4 == 0.0)
        fail(ValidationErrorCode::zero_magnification, "magnifications M_3, M_4 must be nonzero");

    if (!(config.walkoff_i() > 0.0))
        fail(ValidationErrorCode::non_positive_walkoff,
             "-N_p + N_s + K_p*theta_i must be > 0 (got " +
                 std::to_string(config.walkoff_i()) + ")");
    if (!(config.walkoff_s() > 0.0))
        fail(ValidationErrorCode::non_positive_walkoff,
             "N_p - N_s + K_p*theta_s must be > 0 (got " +
                 std::to_string(config.walkoff_s()) + ")");
    if (config.theta_i + config.theta_s < 0.0)
        fail(ValidationErrorCode::negative_angle_sum, "theta_i + theta_s must be >= 0");

    if (needs == Needs::aperture) {
        if (!geom.w_ap.has_value() || !geom.k_fresnel.has_value())
            fail(ValidationErrorCode::missing_aperture_params,
                 "eps_P evaluation requires both w_ap and k_fresnel");
        else if (!finite_positive(*geom.w_ap) || !finite_positive(*geom.k_fresnel))
            fail(ValidationErrorCode::missing_aperture_params,
                 "w_ap and k_fresnel must both be > 0");
    }
    return out;
}

Validated validate(const PhaseMatchConfig& config, const BeamGeometry& geom, Needs needs) {
    auto violations = check(config, geom, needs);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return Validated{config, geom};
}

}  // namespace pdc
