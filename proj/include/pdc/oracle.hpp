#pragma once

#include "pdc/types.hpp"

#include <complex>
#include <cstddef>
#include <stdexcept>

namespace pdc {

// Brute-force evaluator of the defining coincidence/singles overlap
// integrals, built directly from the biphoton field. Used to validate the
// closed forms and to adjudicate the normalization of the multi-mode
// preparation efficiency.
//
// Longitudinal variable: u = tau/D in [0, L]. The Jacobian |D| and the
// biphoton normalization constant cancel in every efficiency ratio, so the
// integrals are reported per unit pump power with N1 = 1.

struct QuadratureSpec {
    std::size_t n_longitudinal = 64;  // Gauss-Legendre points along u
    std::size_t n_transverse = 48;    // points per transverse axis
    double transverse_cutoff = 6.0;   // half-width in units of the local Gaussian width
    // Regression knob: reinstates the pure-phase prefactor of the biphoton
    // field. It closes over |.|^2 at fixed u, so no efficiency may change.
    bool include_pure_phase = false;

    void validate() const;  // counts >= 8, cutoff >= 4
    QuadratureSpec doubled() const;
};

class QuadratureNotConverged : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FieldPoint {
    double x1 = 0.0, y1 = 0.0;  // idler transverse position, um
    double x2 = 0.0, y2 = 0.0;  // signal transverse position, um
    double u = 0.0;             // tau/D, um, in [0, L]
};

// Fills the delta-constrained signal coordinates x2 = x1,
// y2 = y1 + (theta_i + theta_s) u.
FieldPoint constrained_point(double x1, double y1, double u, const PhaseMatchConfig& config);

// Gaussian-exponential factor of the biphoton field at a delta-constrained
// point, N1 = 1; zero outside 0 <= u <= L. With include_phase the
// unit-modulus prefactor exp[-i (K_i theta_i^2 + K_s theta_s theta_i) u] is
// reinstated.
std::complex<double> biphoton_amplitude(const FieldPoint& p, const PhaseMatchConfig& config,
                                        const BeamGeometry& geom, bool include_phase = false);

// Overlap integrals (values proportional to the paper-defined counts; exact
// per-unit-pump-power normalization, so ratios need no extra constants).
double coincidence_single_mode(const PhaseMatchConfig& config, const BeamGeometry& geom,
                               const QuadratureSpec& spec);
double singles_single_mode(const PhaseMatchConfig& config, const BeamGeometry& geom,
                           const QuadratureSpec& spec, int arm);
double coincidence_multimode(const PhaseMatchConfig& config, const BeamGeometry& geom,
                             const QuadratureSpec& spec);
double singles_multimode(const PhaseMatchConfig& config, const BeamGeometry& geom,
                         const QuadratureSpec& spec, int arm);
double coincidence_mixed(const PhaseMatchConfig& config, const BeamGeometry& geom,
                         const QuadratureSpec& spec);

// Composes the defining ratio for `kind`. With verify set, re-evaluates at
// doubled rule sizes and throws QuadratureNotConverged if any ratio moves
// by more than 1e-6 relative.
EfficiencyResult oracle_efficiency(EfficiencyKind kind, const PhaseMatchConfig& config,
                                   const BeamGeometry& geom, const QuadratureSpec& spec,
                                   bool verify = true);

inline constexpr double oracle_convergence_tol = 1e-6;

}  // namespace pdc
