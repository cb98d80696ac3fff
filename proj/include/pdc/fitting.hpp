#pragma once

#include "pdc/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pdc {

enum class AbscissaKind { iris_diameter, pump_waist, preparation_waist };

const char* to_string(AbscissaKind kind);
std::optional<AbscissaKind> abscissa_kind_from_string(const std::string& name);

struct DataRow {
    double abscissa = 0.0;  // um
    double value = 0.0;
    std::optional<double> sigma;
};

// Experimental curve: rows kept in file order; >= 4 rows, strictly positive
// abscissa, positive sigmas when present.
struct DataSet {
    AbscissaKind abscissa_kind = AbscissaKind::iris_diameter;
    std::vector<DataRow> rows;

    double max_abscissa() const;
};

class MalformedRow : public std::runtime_error {
  public:
    MalformedRow(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class NonPositiveAbscissa : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// CSV per the input contract: header `abscissa_um,value,sigma` (sigma column
// optional), '.' decimal, '#' comment lines ignored.
DataSet load_dataset(const std::string& path, AbscissaKind kind);
DataSet parse_dataset(const std::string& text, AbscissaKind kind);

// ---------------------------------------------------------------------------

enum class FitModel { eps_P_thin, chi_P_thin, chi_M_thin, singles_C3 };

const char* to_string(FitModel model);
std::optional<FitModel> fit_model_from_string(const std::string& name);

// Parameter names a model understands (all models accept "amplitude").
std::vector<std::string> model_parameters(FitModel model);

using ParamMap = std::map<std::string, double>;

// Everything a model may need besides its fitted parameters.
struct FixedParams {
    PhaseMatchConfig config;  // used by singles_C3 only
    BeamGeometry geometry;
    double amplitude = 1.0;
};

// Model value at one abscissa point. Iris diameters are mapped to Gaussian
// aperture widths via w_ap = diameter / 2.
double model_value(FitModel model, AbscissaKind kind, double abscissa,
                   const FixedParams& fixed, const ParamMap& params);

struct FitOutcome {
    FitModel model;
    AbscissaKind abscissa_kind = AbscissaKind::iris_diameter;
    ParamMap params;                 // every model parameter, fitted or fixed
    std::vector<std::string> free_names;
    ParamMap uncertainties;          // linearized 1-sigma, free params only
    double residual_rms = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double max_abscissa = 0.0;       // largest abscissa in the fitted dataset
    std::vector<std::string> notes;
};

class SingularJacobian : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Weighted least squares by Levenberg-Marquardt with multiplicative
// (trust-region style) damping. Converged when both the relative step and
// the relative cost decrease drop below 1e-10, capped at 200 iterations;
// hitting the cap returns the best iterate with converged = false.
FitOutcome fit(FitModel model, const DataSet& data,
               const std::vector<std::string>& free_params, const ParamMap& initial_guess,
               const FixedParams& fixed);

inline constexpr double fit_convergence_tol = 1e-10;
inline constexpr int fit_max_iterations = 200;

// ---------------------------------------------------------------------------

struct PumpWaistEntry {
    double w_p = 0.0;
    double saturation = 0.0;  // fitted model value at the common largest abscissa
};

struct PumpWaistReport {
    std::vector<PumpWaistEntry> entries;  // sorted by w_p
    double reference_abscissa = 0.0;
    bool ordering_matches = false;  // saturation strictly increasing with w_p
    bool tie = false;
    std::string summary;
};

// Compares saturation efficiencies across fits taken at different pump
// waists; each outcome must expose "w_p" among its parameters.
PumpWaistReport compare_pump_waists(const std::vector<FitOutcome>& outcomes);

}  // namespace pdc
