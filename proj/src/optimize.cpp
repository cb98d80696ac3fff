#include "pdc/optimize.hpp"

#include "pdc/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace pdc {

const char* to_string(WaistVariable v) {
    switch (v) {
        case WaistVariable::w_p: return "w_p";
        case WaistVariable::w_o1: return "w_o1";
        case WaistVariable::w_o2: return "w_o2";
        case WaistVariable::w_ap: return "w_ap";
    }
    return "?";
}

std::optional<WaistVariable> waist_variable_from_string(const std::string& name) {
    if (name == "w_p") return WaistVariable::w_p;
    if (name == "w_o1") return WaistVariable::w_o1;
    if (name == "w_o2") return WaistVariable::w_o2;
    if (name == "w_ap") return WaistVariable::w_ap;
    return std::nullopt;
}

BeamGeometry with_variable(const BeamGeometry& geom, WaistVariable var, double value) {
    BeamGeometry g = geom;
    switch (var) {
        case WaistVariable::w_p: g.w_p = value; break;
        case WaistVariable::w_o1: g.w_o1 = value; break;
        case WaistVariable::w_o2: g.w_o2 = value; break;
        case WaistVariable::w_ap: g.w_ap = value; break;
    }
    return g;
}

namespace {

constexpr int prescan_points = 32;
// 2 - golden ratio.
constexpr double golden = 0.3819660112501051;

}  // namespace

OptimumRecord optimize_waist(EfficiencyKind target, Regime regime, WaistVariable free,
                             const Bracket& bracket, const PhaseMatchConfig& config,
                             const BeamGeometry& geom) {
    if (!(bracket.lo < bracket.hi) || bracket.lo <= 0.0)
        throw BracketInvalid("bracket must satisfy 0 < lo < hi");
    // Validate once at the lower bracket edge; individual evaluations then
    // reuse the value cores.
    validate(config, with_variable(geom, free, bracket.lo),
             target == EfficiencyKind::eps_P ? Needs::aperture : Needs::efficiency);

    auto objective = [&](double x) {
        return evaluate(target, regime, config, with_variable(geom, free, x)).value;
    };

    // Coarse pre-scan; the refinement bracket is the cell pair around the
    // best sample. Multimodal targets resolve to the best scanned cell.
    std::vector<double> xs(prescan_points), fs(prescan_points);
    int best = 0;
    for (int i = 0; i < prescan_points; ++i) {
        xs[i] = bracket.lo +
                (bracket.hi - bracket.lo) * static_cast<double>(i) / (prescan_points - 1);
        fs[i] = objective(xs[i]);
        if (fs[i] > fs[best]) best = i;
    }
    double a = xs[std::max(0, best - 1)];
    double b = xs[std::min(prescan_points - 1, best + 1)];

    // Golden-section maximization on [a, b].
    double x1 = a + golden * (b - a);
    double x2 = b - golden * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > optimizer_waist_tolerance) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - golden * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + golden * (b - a);
            f1 = objective(x1);
        }
    }
    const double x_golden = f1 > f2 ? x1 : x2;

    // Plateau tie-break: smallest waist whose value is within tolerance of
    // the best seen anywhere.
    std::vector<std::pair<double, double>> candidates;
    candidates.reserve(prescan_points + 3);
    for (int i = 0; i < prescan_points; ++i) candidates.emplace_back(xs[i], fs[i]);
    candidates.emplace_back(x_golden, objective(x_golden));
    double f_max = -std::numeric_limits<double>::infinity();
    for (const auto& [x, f] : candidates) f_max = std::max(f_max, f);
    double x_opt = std::numeric_limits<double>::infinity();
    double f_opt = 0.0;
    for (const auto& [x, f] : candidates) {
        if (f >= f_max - optimizer_plateau_tolerance && x < x_opt) {
            x_opt = x;
            f_opt = f;
        }
    }

    OptimumRecord rec;
    rec.target = target;
    rec.free_variable = free;
    rec.optimum_value = x_opt;
    rec.efficiency_at_optimum = f_opt;
    rec.bracket = bracket;
    rec.fixed_config = config;
    rec.fixed_geometry = geom;
    rec.interior = x_opt - bracket.lo > optimizer_waist_tolerance &&
                   bracket.hi - x_opt > optimizer_waist_tolerance;
    return rec;
}

std::vector<OptimumRecord> optimum_curve(EfficiencyKind target, Regime regime,
                                         WaistVariable free, const Bracket& bracket,
                                         WaistVariable sweep,
                                         const std::vector<double>& sweep_grid,
                                         const PhaseMatchConfig& config,
                                         const BeamGeometry& geom) {
    std::vector<OptimumRecord> out;
    out.reserve(sweep_grid.size());
    for (double s : sweep_grid) {
        try {
            OptimumRecord rec =
                optimize_waist(target, regime, free, bracket, config,
                               with_variable(geom, sweep, s));
            rec.sweep_value = s;
            out.push_back(std::move(rec));
        } catch (const std::exception& e) {
            OptimumRecord rec;
            rec.target = target;
            rec.free_variable = free;
            rec.bracket = bracket;
            rec.fixed_config = config;
            rec.fixed_geometry = with_variable(geom, sweep, s);
            rec.sweep_value = s;
            rec.error = e.what();
            out.push_back(std::move(rec));
        }
    }
    return out;
}

}  // namespace pdc
