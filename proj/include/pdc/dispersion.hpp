#pragma once

#include "pdc/types.hpp"

#include <stdexcept>
#include <vector>

namespace pdc {

// Speed of light in um/s; converts angular frequencies in rad/s to
// wavenumbers in rad/um.
inline constexpr double speed_of_light_um_per_s = 2.99792458e14;

// Tabulated refractive index n(omega, phi) on a rectangular grid.
// omega in rad/s ascending, phi in rad ascending, n stored row-major with
// omega as the slow axis: n[i_omega * phi.size() + i_phi].
struct DispersionTable {
    std::vector<double> omega;
    std::vector<double> phi;
    std::vector<double> n;
};

struct DispersionSamples {
    DispersionTable pump;
    DispersionTable signal;
    DispersionTable idler;
};

class OutOfGridRange : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Walk-off and wavenumber block of a PhaseMatchConfig computed from the
// tables by quadratic (3-point) interpolation, so derivatives are central
// second-order finite differences: exact on quadratic tables, error ratio
// ~4 per grid halving otherwise.
struct WalkoffResult {
    double K_p, K_s, K_i;  // rad/um
    double N_p, N_s;       // rad/um
    double D;
};

WalkoffResult walkoff_from_dispersion(const DispersionSamples& samples, double Omega_p,
                                      double Omega_s, double Omega_i, double phi_0);

}  // namespace pdc
