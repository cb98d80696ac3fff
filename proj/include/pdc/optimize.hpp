#pragma once

#include "pdc/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pdc {

// Waist variables the optimizer and sweeps can drive.
enum class WaistVariable { w_p, w_o1, w_o2, w_ap };

const char* to_string(WaistVariable v);
std::optional<WaistVariable> waist_variable_from_string(const std::string& name);

// Applies a value to the chosen variable of a geometry copy.
BeamGeometry with_variable(const BeamGeometry& geom, WaistVariable var, double value);

struct Bracket {
    double lo = 5.0;     // um
    double hi = 2000.0;  // um
};

class BracketInvalid : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct OptimumRecord {
    EfficiencyKind target;
    WaistVariable free_variable;
    double optimum_value = 0.0;           // um
    double efficiency_at_optimum = 0.0;
    Bracket bracket;
    PhaseMatchConfig fixed_config;
    BeamGeometry fixed_geometry;
    bool interior = true;                 // false: maximum sits at a bracket edge
    std::optional<double> sweep_value;    // set by optimum_curve
    std::optional<std::string> error;     // per-point failure in a sweep
};

// Coarse 32-point pre-scan followed by golden-section refinement of the
// best cell, to 0.01 um absolute tolerance on the waist. Plateaus resolve
// to the smallest waist achieving the maximum within 1e-12.
OptimumRecord optimize_waist(EfficiencyKind target, Regime regime, WaistVariable free,
                             const Bracket& bracket, const PhaseMatchConfig& config,
                             const BeamGeometry& geom);

inline constexpr double optimizer_waist_tolerance = 0.01;  // um
inline constexpr double optimizer_plateau_tolerance = 1e-12;

// Maps optimize_waist over a sweep grid of another variable. Per-point
// errors are recorded in the corresponding record, not thrown.
std::vector<OptimumRecord> optimum_curve(EfficiencyKind target, Regime regime,
                                         WaistVariable free, const Bracket& bracket,
                                         WaistVariable sweep,
                                         const std::vector<double>& sweep_grid,
                                         const PhaseMatchConfig& config,
                                         const BeamGeometry& geom);

}  // namespace pdc
