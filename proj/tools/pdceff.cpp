// pdceff: evaluates, sweeps, optimizes and fits PDC coupling efficiencies,
// emitting plot-ready CSV. Exit codes: 0 success, 1 config/usage error,
// 2 validation or numerical-domain error.

#include "pdc/closed_form.hpp"
#include "pdc/config_io.hpp"
#include "pdc/fitting.hpp"
#include "pdc/optimize.hpp"
#include "pdc/oracle.hpp"
#include "pdc/types.hpp"
#include "pdc/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace pdc;

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct Grid {
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;

    std::vector<double> points() const {
        std::vector<double> out(count);
        if (count == 1) {
            out[0] = lo;
            return out;
        }
        for (std::size_t i = 0; i < count; ++i)
            out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        return out;
    }
};

// Grid syntax lo:hi:count, endpoints inclusive.
Grid parse_grid(const std::string& text) {
    Grid g;
    char extra = 0;
    unsigned long long n = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%llu%c", &g.lo, &g.hi, &n, &extra) != 3 || n == 0)
        throw CLI::ValidationError("grid", "expected lo:hi:count, got '" + text + "'");
    g.count = static_cast<std::size_t>(n);
    if (g.count > 1 && !(g.lo < g.hi))
        throw CLI::ValidationError("grid", "grid requires lo < hi");
    return g;
}

std::string provenance(const LoadedConfig& cfg, const std::string& config_path, int argc,
                       char** argv) {
    std::ostringstream os;
    os << "# pdceff " << version << "\n";
    os << "# config: " << config_path << " fnv1a=" << hex64(cfg.digest) << "\n";
    os << "# command:";
    for (int i = 0; i < argc; ++i) os << ' ' << argv[i];
    os << "\n";
    return os.str();
}

void write_output(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + path);
    out << body;
}

// Sweep variables accepted by `scan`; w_o drives both mode waists together.
enum class ScanVariable { w_p, w_o1, w_o2, w_o, w_ap, L };

ScanVariable scan_variable(const std::string& name) {
    if (name == "w_p") return ScanVariable::w_p;
    if (name == "w_o1") return ScanVariable::w_o1;
    if (name == "w_o2") return ScanVariable::w_o2;
    if (name == "w_o") return ScanVariable::w_o;
    if (name == "w_ap") return ScanVariable::w_ap;
    if (name == "L") return ScanVariable::L;
    throw CLI::ValidationError("var", "unknown sweep variable '" + name + "'");
}

void apply_scan_variable(ScanVariable var, double value, PhaseMatchConfig& c,
                         BeamGeometry& g) {
    switch (var) {
        case ScanVariable::w_p: g.w_p = value; break;
        case ScanVariable::w_o1: g.w_o1 = value; break;
        case ScanVariable::w_o2: g.w_o2 = value; break;
        case ScanVariable::w_o: g.w_o1 = g.w_o2 = value; break;
        case ScanVariable::w_ap: g.w_ap = value; break;
        case ScanVariable::L: c.L = value; break;
    }
}

EfficiencyKind parse_kind(const std::string& name) {
    auto k = efficiency_kind_from_string(name);
    if (!k) throw CLI::ValidationError("kind", "unknown efficiency kind '" + name + "'");
    return *k;
}

Regime parse_regime(const std::string& name) {
    if (name == "full") return Regime::full_crystal;
    if (name == "thin") return Regime::thin_crystal;
    throw CLI::ValidationError("regime", "regime must be 'full' or 'thin'");
}

ParamMap parse_assignments(const std::vector<std::string>& items) {
    ParamMap out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("init", "expected name=value, got '" + item + "'");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(item);
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"PDC coupling-efficiency calculator"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    std::string config_path, output_path;
    std::string kind_name = "chi_M", regime_name = "full";

    auto add_common = [&](CLI::App* cmd, bool kind_opt = true) {
        cmd->add_option("--config", config_path, "JSON parameter file")->required();
        cmd->add_option("--output", output_path, "output CSV path (default stdout)");
        if (kind_opt) {
            cmd->add_option("--kind", kind_name, "efficiency kind");
            cmd->add_option("--regime", regime_name, "full or thin");
        }
    };

    auto* cmd_eval = app.add_subcommand("eval", "evaluate one efficiency");
    add_common(cmd_eval);

    auto* cmd_scan = app.add_subcommand("scan", "sweep one variable, emit a curve");
    add_common(cmd_scan);
    std::string scan_var = "w_o2", grid_text;
    bool with_oracle = false;
    cmd_scan->add_option("--var", scan_var, "sweep variable (w_p|w_o1|w_o2|w_o|w_ap|L)");
    cmd_scan->add_option("--grid", grid_text, "lo:hi:count, inclusive")->required();
    cmd_scan->add_flag("--oracle", with_oracle, "append a quadrature-oracle column");

    auto* cmd_opt = app.add_subcommand("optimize", "optimize one waist, optionally swept");
    add_common(cmd_opt);
    std::string free_var = "w_o2", bracket_text = "5:2000", sweep_text;
    cmd_opt->add_option("--target", kind_name, "efficiency kind to maximize");
    cmd_opt->add_option("--free", free_var, "waist to optimize (w_p|w_o1|w_o2|w_ap)");
    cmd_opt->add_option("--bracket", bracket_text, "search interval lo:hi in um");
    cmd_opt->add_option("--sweep", sweep_text, "var=lo:hi:count sweep of a second variable");

    auto* cmd_fit = app.add_subcommand("fit", "fit a model to experimental CSV data");
    add_common(cmd_fit, false);
    std::string model_name, data_path, abscissa_name = "iris_diameter", free_list,
                              init_list;
    cmd_fit->add_option("--model", model_name, "eps_P_thin|chi_P_thin|chi_M_thin|singles_C3")
        ->required();
    cmd_fit->add_option("--data", data_path, "input CSV (abscissa_um,value[,sigma])")
        ->required();
    cmd_fit->add_option("--abscissa", abscissa_name,
                        "iris_diameter|pump_waist|preparation_waist");
    cmd_fit->add_option("--free", free_list, "comma-separated free parameters")->required();
    cmd_fit->add_option("--init", init_list, "comma-separated name=value initial guesses");

    auto* cmd_oracle = app.add_subcommand("oracle-check",
                                          "compare closed forms against the quadrature oracle");
    add_common(cmd_oracle);
    std::size_t oracle_points = 5;
    cmd_oracle->add_option("--points", oracle_points, "number of w_o2 check points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Normalize CLI11's assorted usage-error codes onto the documented
        // config-error exit code.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const LoadedConfig cfg = load_config(config_path);
    const std::string header = provenance(cfg, config_path, argc, argv);

    if (*cmd_eval) {
        const EfficiencyKind kind = parse_kind(kind_name);
        const Regime regime = parse_regime(regime_name);
        EfficiencyResult r = evaluate(kind, regime, cfg.phase_match, cfg.geometry);
        std::ostringstream body;
        body << header;
        for (const auto& note : r.notes) body << "# note: " << note << "\n";
        body << "kind,regime,value\n";
        body << to_string(r.kind) << ',' << to_string(r.regime) << ',' << fmt9(r.value)
             << "\n";
        write_output(output_path, body.str());
        return 0;
    }

    if (*cmd_scan) {
        const EfficiencyKind kind = parse_kind(kind_name);
        const Regime regime = parse_regime(regime_name);
        const ScanVariable var = scan_variable(scan_var);
        const Grid grid = parse_grid(grid_text);

        ScanSeries series;
        series.abscissa_name = scan_var;
        series.fixed_config = cfg.phase_match;
        series.fixed_geometry = cfg.geometry;
        std::vector<double> oracle_col;
        QuadratureSpec qspec;
        for (double x : grid.points()) {
            PhaseMatchConfig c = cfg.phase_match;
            BeamGeometry g = cfg.geometry;
            apply_scan_variable(var, x, c, g);
            series.abscissa.push_back(x);
            series.ordinate.push_back(evaluate(kind, regime, c, g).value);
            if (with_oracle)
                oracle_col.push_back(
                    oracle_efficiency(kind, c, g, qspec, /*verify=*/false).value);
        }

        std::ostringstream body;
        body << header;
        body << scan_var << "_um," << to_string(kind);
        if (with_oracle) body << ",oracle_" << to_string(kind);
        body << "\n";
        for (std::size_t i = 0; i < series.abscissa.size(); ++i) {
            body << fmt9(series.abscissa[i]) << ',' << fmt9(series.ordinate[i]);
            if (with_oracle) body << ',' << fmt9(oracle_col[i]);
            body << "\n";
        }
        write_output(output_path, body.str());
        return 0;
    }

    if (*cmd_opt) {
        const EfficiencyKind kind = parse_kind(kind_name);
        const Regime regime = parse_regime(regime_name);
        auto free = waist_variable_from_string(free_var);
        if (!free) throw CLI::ValidationError("free", "unknown waist '" + free_var + "'");
        Grid br = parse_grid(bracket_text + ":2");
        Bracket bracket{br.lo, br.hi};

        std::ostringstream body;
        body << header;
        if (sweep_text.empty()) {
            OptimumRecord rec = optimize_waist(kind, regime, *free, bracket,
                                               cfg.phase_match, cfg.geometry);
            body << "optimum_" << free_var << "_um," << to_string(kind) << ",interior\n";
            body << fmt9(rec.optimum_value) << ',' << fmt9(rec.efficiency_at_optimum) << ','
                 << (rec.interior ? 1 : 0) << "\n";
        } else {
            auto eq = sweep_text.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("sweep", "expected var=lo:hi:count");
            auto sweep = waist_variable_from_string(sweep_text.substr(0, eq));
            if (!sweep)
                throw CLI::ValidationError("sweep", "unknown sweep variable");
            const Grid grid = parse_grid(sweep_text.substr(eq + 1));
            auto records = optimum_curve(kind, regime, *free, bracket, *sweep,
                                         grid.points(), cfg.phase_match, cfg.geometry);
            body << sweep_text.substr(0, eq) << "_um,optimum_" << free_var << "_um,"
                 << to_string(kind) << ",interior,error\n";
            for (const auto& rec : records) {
                body << fmt9(rec.sweep_value.value_or(0.0)) << ',';
                if (rec.error) {
                    body << ",,," << *rec.error << "\n";
                } else {
                    body << fmt9(rec.optimum_value) << ','
                         << fmt9(rec.efficiency_at_optimum) << ',' << (rec.interior ? 1 : 0)
                         << ",\n";
                }
            }
        }
        write_output(output_path, body.str());
        return 0;
    }

    if (*cmd_fit) {
        auto model = fit_model_from_string(model_name);
        if (!model) throw CLI::ValidationError("model", "unknown model '" + model_name + "'");
        auto kind = abscissa_kind_from_string(abscissa_name);
        if (!kind)
            throw CLI::ValidationError("abscissa", "unknown abscissa kind '" + abscissa_name +
                                                       "'");
        const DataSet data = load_dataset(data_path, *kind);
        FixedParams fixed;
        fixed.config = cfg.phase_match;
        fixed.geometry = cfg.geometry;
        const auto free = split_list(free_list);
        const ParamMap init = parse_assignments(split_list(init_list));
        FitOutcome outcome = fit(*model, data, free, init, fixed);

        std::ostringstream body;
        body << header;
        body << "# residual_rms=" << fmt9(outcome.residual_rms)
             << " converged=" << (outcome.converged ? 1 : 0)
             << " iterations=" << outcome.iterations << "\n";
        for (const auto& note : outcome.notes) body << "# note: " << note << "\n";
        body << "param,value,uncertainty,free\n";
        for (const auto& [name, value] : outcome.params) {
            const bool is_free =
                std::find(outcome.free_names.begin(), outcome.free_names.end(), name) !=
                outcome.free_names.end();
            body << name << ',' << fmt9(value) << ',';
            if (is_free) body << fmt9(outcome.uncertainties.at(name));
            body << ',' << (is_free ? 1 : 0) << "\n";
        }
        write_output(output_path, body.str());

        if (!output_path.empty()) {
            std::cout << "fit " << to_string(*model) << " on " << data_path << ": "
                      << (outcome.converged ? "converged" : "did not converge") << " after "
                      << outcome.iterations << " iterations, residual rms "
                      << fmt9(outcome.residual_rms) << "\n";
            for (const auto& name : outcome.free_names)
                std::cout << "  " << name << " = " << fmt9(outcome.params.at(name)) << " +- "
                          << fmt9(outcome.uncertainties.at(name)) << "\n";
        }
        return 0;
    }

    if (*cmd_oracle) {
        const EfficiencyKind kind = parse_kind(kind_name);
        QuadratureSpec qspec;
        // Check points: a geometric fan of collection waists about the
        // configured one.
        std::vector<double> factors;
        for (std::size_t i = 0; i < oracle_points; ++i) {
            const double t = oracle_points == 1
                                 ? 0.0
                                 : -1.0 + 2.0 * static_cast<double>(i) /
                                              static_cast<double>(oracle_points - 1);
            factors.push_back(std::pow(2.0, t));
        }
        std::ostringstream body;
        body << header;
        body << "w_o2_um,closed_form,oracle,rel_deviation\n";
        double max_dev = 0.0;
        for (double f : factors) {
            BeamGeometry g = cfg.geometry;
            g.w_o2 = cfg.geometry.w_o2 * f;
            const double closed = evaluate(kind, Regime::full_crystal, cfg.phase_match, g).value;
            const double oracle =
                oracle_efficiency(kind, cfg.phase_match, g, qspec).value;
            const double dev = std::abs(closed - oracle) / std::abs(oracle);
            max_dev = std::max(max_dev, dev);
            body << fmt9(g.w_o2) << ',' << fmt9(closed) << ',' << fmt9(oracle) << ','
                 << fmt9(dev) << "\n";
        }
        write_output(output_path, body.str());
        std::cout << "oracle-check " << to_string(kind) << ": max relative deviation "
                  << fmt9(max_dev) << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const pdc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
