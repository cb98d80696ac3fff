#include "pdc/fitting.hpp"

#include "pdc/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace pdc {

const char* to_string(AbscissaKind kind) {
    switch (kind) {
        case AbscissaKind::iris_diameter: return "iris_diameter";
        case AbscissaKind::pump_waist: return "pump_waist";
        case AbscissaKind::preparation_waist: return "preparation_waist";
    }
    return "?";
}

std::optional<AbscissaKind> abscissa_kind_from_string(const std::string& name) {
    if (name == "iris_diameter") return AbscissaKind::iris_diameter;
    if (name == "pump_waist") return AbscissaKind::pump_waist;
    if (name == "preparation_waist") return AbscissaKind::preparation_waist;
    return std::nullopt;
}

double DataSet::max_abscissa() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.abscissa);
    return m;
}

MalformedRow::MalformedRow(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
    const std::string t = trim(field);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw MalformedRow(line, "not a number: '" + t + "'");
    }
    if (pos != t.size()) throw MalformedRow(line, "trailing characters in '" + t + "'");
    return v;
}

}  // namespace

DataSet parse_dataset(const std::string& text, AbscissaKind kind) {
    DataSet ds;
    ds.abscissa_kind = kind;
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool has_sigma = false;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            auto fields = split_csv(t);
            if (fields.size() < 2 || trim(fields[0]) != "abscissa_um" ||
                trim(fields[1]) != "value")
                throw MalformedRow(line_no, "expected header 'abscissa_um,value[,sigma]'");
            if (fields.size() == 3 && trim(fields[2]) == "sigma")
                has_sigma = true;
            else if (fields.size() > 2)
                throw MalformedRow(line_no, "unexpected header columns");
            header_seen = true;
            continue;
        }
        auto fields = split_csv(t);
        const std::size_t expected = has_sigma ? 3 : 2;
        if (fields.size() != expected)
            throw MalformedRow(line_no, "expected " + std::to_string(expected) +
                                            " columns, got " + std::to_string(fields.size()));
        DataRow row;
        row.abscissa = parse_number(fields[0], line_no);
        row.value = parse_number(fields[1], line_no);
        if (has_sigma) {
            row.sigma = parse_number(fields[2], line_no);
            if (!(*row.sigma > 0.0)) throw MalformedRow(line_no, "sigma must be > 0");
        }
        if (!(row.abscissa > 0.0))
            throw NonPositiveAbscissa("line " + std::to_string(line_no) +
                                      ": abscissa must be > 0");
        ds.rows.push_back(row);
    }
    if (!header_seen) throw std::runtime_error("dataset has no header line");
    if (ds.rows.size() < 4)
        throw std::runtime_error("dataset needs at least 4 rows, got " +
                                 std::to_string(ds.rows.size()));
    return ds;
}

DataSet load_dataset(const std::string& path, AbscissaKind kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), kind);
}

// ---------------------------------------------------------------------------

const char* to_string(FitModel model) {
    switch (model) {
        case FitModel::eps_P_thin: return "eps_P_thin";
        case FitModel::chi_P_thin: return "chi_P_thin";
        case FitModel::chi_M_thin: return "chi_M_thin";
        case FitModel::singles_C3: return "singles_C3";
    }
    return "?";
}

std::optional<FitModel> fit_model_from_string(const std::string& name) {
    if (name == "eps_P_thin") return FitModel::eps_P_thin;
    if (name == "chi_P_thin") return FitModel::chi_P_thin;
    if (name == "chi_M_thin") return FitModel::chi_M_thin;
    if (name == "singles_C3") return FitModel::singles_C3;
    return std::nullopt;
}

std::vector<std::string> model_parameters(FitModel model) {
    switch (model) {
        case FitModel::eps_P_thin: return {"k_fresnel", "w_p", "w_o1", "amplitude"};
        case FitModel::chi_P_thin:
        case FitModel::chi_M_thin: return {"w_o1", "w_o2", "amplitude"};
        case FitModel::singles_C3: return {"w_p", "amplitude"};
    }
    return {};
}

namespace {

double param_or(const ParamMap& params, const std::string& name, double fallback) {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

double model_value(FitModel model, AbscissaKind kind, double abscissa,
                   const FixedParams& fixed, const ParamMap& params) {
    const double amplitude = param_or(params, "amplitude", fixed.amplitude);
    switch (model) {
        case FitModel::eps_P_thin: {
            BeamGeometry g = fixed.geometry;
            g.w_p = param_or(params, "w_p", fixed.geometry.w_p);
            g.w_o1 = param_or(params, "w_o1", fixed.geometry.w_o1);
            g.k_fresnel = param_or(params, "k_fresnel",
                                   fixed.geometry.k_fresnel.value_or(0.0));
            g.w_ap = kind == AbscissaKind::iris_diameter ? abscissa / 2.0 : abscissa;
            return amplitude * eps_P_thin_value(g);
        }
        case FitModel::chi_P_thin:
        case FitModel::chi_M_thin: {
            BeamGeometry g = fixed.geometry;
            g.w_p = abscissa;  // pump-waist sweep
            g.w_o1 = param_or(params, "w_o1", fixed.geometry.w_o1);
            g.w_o2 = param_or(params, "w_o2", fixed.geometry.w_o2);
            return amplitude * (model == FitModel::chi_P_thin ? chi_P_thin_value(g, 3)
                                                              : chi_M_thin_value(g));
        }
        case FitModel::singles_C3: {
            const double w_p = param_or(params, "w_p", fixed.geometry.w_p);
            return amplitude * singles_C3_value(fixed.config, w_p, abscissa);
        }
    }
    throw std::invalid_argument("unknown fit model");
}

namespace {

// Solves the symmetric positive system A x = b in place by Gaussian
// elimination with partial pivoting; returns false on a vanishing pivot.
bool solve_dense(std::vector<double>& A, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (std::abs(A[piv * n + col]) < 1e-300) return false;
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(A[col * n + k], A[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            for (std::size_t k = col; k < n; ++k) A[r * n + k] -= f * A[col * n + k];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * b[k];
        b[i] = s / A[i * n + i];
    }
    return true;
}

bool params_admissible(FitModel model, const ParamMap& p) {
    for (const auto& [name, value] : p) {
        if (!std::isfinite(value)) return false;
        if (name == "amplitude") continue;
        if (value <= 0.0) return false;  // waists and k_fresnel are positive
    }
    (void)model;
    return true;
}

}  // namespace

FitOutcome fit(FitModel model, const DataSet& data,
               const std::vector<std::string>& free_params, const ParamMap& initial_guess,
               const FixedParams& fixed) {
    const auto known = model_parameters(model);
    for (const auto& name : free_params)
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw std::invalid_argument("parameter '" + name + "' not in model " +
                                        to_string(model));
    const std::size_t n_free = free_params.size();
    const std::size_t n_rows = data.rows.size();
    if (n_free == 0) throw std::invalid_argument("no free parameters");
    if (n_rows < n_free) throw std::invalid_argument("fewer rows than free parameters");

    // Resolve the full parameter map: fixed values overlaid by the guess.
    ParamMap params;
    for (const auto& name : known) {
        if (name == "amplitude")
            params[name] = fixed.amplitude;
        else if (name == "k_fresnel")
            params[name] = fixed.geometry.k_fresnel.value_or(0.0);
        else if (name == "w_p")
            params[name] = fixed.geometry.w_p;
        else if (name == "w_o1")
            params[name] = fixed.geometry.w_o1;
        else if (name == "w_o2")
            params[name] = fixed.geometry.w_o2;
    }
    for (const auto& [name, value] : initial_guess) params[name] = value;
    if (!params_admissible(model, params))
        throw std::invalid_argument("initial guess violates parameter positivity");

    auto residuals = [&](const ParamMap& p, std::vector<double>& r) {
        for (std::size_t i = 0; i < n_rows; ++i) {
            const DataRow& row = data.rows[i];
            const double w = row.sigma ? 1.0 / *row.sigma : 1.0;
            r[i] = w * (model_value(model, data.abscissa_kind, row.abscissa, fixed, p) -
                        row.value);
        }
    };
    auto cost_of = [&](const std::vector<double>& r) {
        double c = 0.0;
        for (double v : r) c += v * v;
        return 0.5 * c;
    };

    std::vector<double> r(n_rows), r_trial(n_rows), r_lo(n_rows);
    residuals(params, r);
    double cost = cost_of(r);

    // Central-difference Jacobian: O(h^2) truncation keeps the gradient
    // accurate enough to polish zero-noise fits to ~1e-12.
    auto jacobian = [&](const ParamMap& at, std::vector<double>& jac) {
        for (std::size_t j = 0; j < n_free; ++j) {
            const std::string& name = free_params[j];
            const double v0 = at.at(name);
            const double h = 1e-6 * std::max(std::abs(v0), 1e-12);
            ParamMap bumped = at;
            bumped[name] = v0 + h;
            residuals(bumped, r_trial);
            bumped[name] = v0 - h;
            residuals(bumped, r_lo);
            for (std::size_t i = 0; i < n_rows; ++i)
                jac[i * n_free + j] = (r_trial[i] - r_lo[i]) / (2.0 * h);
        }
    };

    std::vector<double> jac(n_rows * n_free);
    std::vector<double> jtj(n_free * n_free);
    double lambda = 1e-3;
    bool converged = false;
    std::size_t iter = 0;

    for (; iter < fit_max_iterations; ++iter) {
        jacobian(params, jac);

        std::vector<double> g(n_free, 0.0);
        for (std::size_t a = 0; a < n_free; ++a) {
            for (std::size_t b = a; b < n_free; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < n_rows; ++i)
                    s += jac[i * n_free + a] * jac[i * n_free + b];
                jtj[a * n_free + b] = jtj[b * n_free + a] = s;
            }
            for (std::size_t i = 0; i < n_rows; ++i) g[a] += jac[i * n_free + a] * r[i];
        }

        bool jtj_dead = true;
        for (std::size_t a = 0; a < n_free; ++a)
            if (jtj[a * n_free + a] > 1e-300) jtj_dead = false;
        if (jtj_dead) throw SingularJacobian("all Jacobian columns vanish");

        bool stepped = false;
        while (lambda < 1e14) {
            // Marquardt scaling: damp with lambda * diag(JtJ) so the step is
            // invariant under uniform residual rescaling.
            std::vector<double> A = jtj;
            for (std::size_t a = 0; a < n_free; ++a) A[a * n_free + a] *= 1.0 + lambda;
            std::vector<double> rhs(n_free);
            for (std::size_t a = 0; a < n_free; ++a) rhs[a] = -g[a];
            if (!solve_dense(A, rhs, n_free)) {
                lambda *= 8.0;
                continue;
            }
            ParamMap trial = params;
            for (std::size_t a = 0; a < n_free; ++a) trial[free_params[a]] += rhs[a];
            if (!params_admissible(model, trial)) {
                lambda *= 8.0;
                continue;
            }
            residuals(trial, r_trial);
            const double trial_cost = cost_of(r_trial);
            if (trial_cost <= cost) {
                double step_rel = 0.0;
                for (std::size_t a = 0; a < n_free; ++a)
                    step_rel = std::max(step_rel,
                                        std::abs(rhs[a]) /
                                            std::max(std::abs(trial.at(free_params[a])), 1e-12));
                const double cost_rel = (cost - trial_cost) / std::max(cost, 1e-300);
                params = trial;
                r = r_trial;
                cost = trial_cost;
                lambda = std::max(lambda / 8.0, 1e-12);
                stepped = true;
                if (step_rel < fit_convergence_tol && cost_rel < fit_convergence_tol)
                    converged = true;
                break;
            }
            lambda *= 8.0;
        }
        if (converged) {
            ++iter;
            break;
        }
        if (!stepped) {
            // Damping exhausted without an acceptable step: already at a
            // (possibly flat) minimum.
            converged = true;
            ++iter;
            break;
        }
    }

    FitOutcome out;
    out.model = model;
    out.abscissa_kind = data.abscissa_kind;
    out.params = params;
    out.free_names = free_params;
    out.residual_rms = std::sqrt(2.0 * cost / static_cast<double>(n_rows));
    out.converged = converged;
    out.iterations = iter;
    out.max_abscissa = data.max_abscissa();
    if (data.abscissa_kind == AbscissaKind::iris_diameter && model == FitModel::eps_P_thin)
        out.notes.push_back("iris diameters mapped to Gaussian widths as w_ap = diameter/2");

    // Linearized covariance from the final Jacobian: cov = s^2 (JtJ)^-1.
    {
        jacobian(params, jac);
        const double dof = static_cast<double>(n_rows > n_free ? n_rows - n_free : 1);
        const double s2 = 2.0 * cost / dof;
        for (std::size_t a = 0; a < n_free; ++a) {
            std::vector<double> A(n_free * n_free);
            for (std::size_t p = 0; p < n_free; ++p)
                for (std::size_t q = 0; q < n_free; ++q) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < n_rows; ++i)
                        s += jac[i * n_free + p] * jac[i * n_free + q];
                    A[p * n_free + q] = s;
                }
            std::vector<double> e(n_free, 0.0);
            e[a] = 1.0;
            if (solve_dense(A, e, n_free) && e[a] >= 0.0)
                out.uncertainties[free_params[a]] = std::sqrt(s2 * e[a]);
            else
                out.uncertainties[free_params[a]] =
                    std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

PumpWaistReport compare_pump_waists(const std::vector<FitOutcome>& outcomes) {
    if (outcomes.size() < 2)
        throw std::invalid_argument("compare_pump_waists needs at least 2 outcomes");

    PumpWaistReport rep;
    rep.reference_abscissa = outcomes.front().max_abscissa;
    for (const auto& o : outcomes)
        rep.reference_abscissa = std::min(rep.reference_abscissa, o.max_abscissa);

    for (const auto& o : outcomes) {
        auto it = o.params.find("w_p");
        if (it == o.params.end())
            throw std::invalid_argument("outcome does not expose a pump waist");
        FixedParams fx;
        fx.geometry.w_p = it->second;
        fx.geometry.w_o1 = param_or(o.params, "w_o1", 1.0);
        fx.geometry.w_o2 = param_or(o.params, "w_o2", 1.0);
        fx.geometry.k_fresnel = param_or(o.params, "k_fresnel", 1.0);
        fx.amplitude = param_or(o.params, "amplitude", 1.0);
        const double sat =
            model_value(o.model, o.abscissa_kind, rep.reference_abscissa, fx, o.params);
        rep.entries.push_back({it->second, sat});
    }
    std::sort(rep.entries.begin(), rep.entries.end(),
              [](const PumpWaistEntry& a, const PumpWaistEntry& b) { return a.w_p < b.w_p; });

    rep.ordering_matches = true;
    for (std::size_t i = 1; i < rep.entries.size(); ++i) {
        const double d = rep.entries[i].saturation - rep.entries[i - 1].saturation;
        if (std::abs(d) < 1e-12) rep.tie = true;
        if (d <= 0.0) rep.ordering_matches = false;
    }
    if (rep.tie) rep.ordering_matches = false;

    std::ostringstream os;
    os << "saturation at abscissa " << rep.reference_abscissa << " um:";
    for (const auto& e : rep.entries)
        os << " (w_p=" << e.w_p << " -> " << e.saturation << ")";
    os << (rep.tie ? "; tie between pump waists"
                   : rep.ordering_matches ? "; increases with pump waist"
                                          : "; does not increase with pump waist");
    rep.summary = os.str();
    return rep;
}

}  // namespace pdc
