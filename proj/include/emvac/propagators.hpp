#pragma once

#include "emvac/media.hpp"
#include "emvac/quadrature.hpp"
#include "emvac/spectral.hpp"

namespace emvac {

// ---------------------------------------------------------------------------
// Dyson-resummed field propagators.
// ---------------------------------------------------------------------------

// Transverse: 1 / (k^2 (1 + i eta)^2 [1 + chi_perp(q)] - q^2).
cdouble dyson_perp(double q, double k, const SusceptibilityModel& m,
                   double eta = 0.0);

// Longitudinal: 1 / (k^2 [1 + chi_par(q)]); no propagating pole in q.
cdouble dyson_par(double q, double k, const SusceptibilityModel& m);

// ---------------------------------------------------------------------------
// Polarization-field propagator of the virtual-cavity scenario. Three
// algebraically identical constructions are kept separate so their agreement
// can be checked numerically:
//   lff:        (chi / rho*alpha) G
//   difference: (1 / k^2 rho*alpha) [1 - G / G0]
//   tmatrix:    (-1 / k^2 rho*alpha) T G0 with T = (G - G0) / G0^2
// ---------------------------------------------------------------------------

enum class GvcRoute { lff, difference, tmatrix };

cdouble gvc_perp(double q, double k, const SusceptibilityModel& m,
                 GvcRoute route = GvcRoute::lff, double eta = 0.0);
cdouble gvc_par(double q, double k, const SusceptibilityModel& m,
                GvcRoute route = GvcRoute::lff);

// Irreducible kernel of the polarization propagator's Lippmann-Schwinger
// equation: Xi = (-rho*alpha / chi G0) [1 - chi/(rho*alpha) + k^2 chi G0].
// Satisfies Gvc = G0 + G0 Xi Gvc. For a dilute medium (chi = rho*alpha)
// Xi_perp = -k^2 rho*alpha exactly.
cdouble kernel_xi_perp(double q, double k, const SusceptibilityModel& m,
                       double eta = 0.0);
cdouble kernel_xi_par(double q, double k, const SusceptibilityModel& m);

// ---------------------------------------------------------------------------
// Self-field factors of an embedded dipole.
// ---------------------------------------------------------------------------

// phi0_perp: free-space transverse self-field (regularised).
// phi_sc_perp / phi_sc_par: scattering parts, the momentum integrals of the
// polarization propagator minus its free-space limit. Their real parts
// inherit an explicit q_max dependence (short-range physics outside the
// model); imaginary parts are cutoff-stable.
struct PhiFactors {
    cdouble phi0_perp{0.0, 0.0};
    cdouble phi_sc_perp{0.0, 0.0};
    cdouble phi_sc_par{0.0, 0.0};
    double k = 0.0;
    std::string provenance;

    // scattering combination entering resonance shifts
    cdouble sum_sc() const { return 2.0 * phi_sc_perp + phi_sc_par; }
    // full combination entering emission rates
    cdouble sum_total() const { return 2.0 * phi0_perp + sum_sc(); }
};

// Assemble the phi factors for a medium at wavenumber k. An empty medium
// (rho*alpha = 0) yields exactly zero scattering parts. Throws NumericError
// when q_max fails to enclose the propagating pole of the medium, and
// ValidationError when a passive medium produces a positive Im sum_total
// (gain from a lossless model is an internal inconsistency).
PhiFactors phi_factors(const SusceptibilityModel& m, double k,
                       const QuadratureSpec& spec);

// Self-field factors of a correlation-hole medium with the ensemble-
// calibrated sharp window: Maxwell Garnett response below
// q_c = (9 pi / 2)^{1/3} / xi and the momentum integral truncated at q_c.
// The truncation removes the uncorrelated contact tail that the hole
// excludes in real space, so the real parts are finite and physical; this
// is the variant validated against explicit dipole ensembles. spec.q_max
// is overridden by q_c.
PhiFactors phi_factors_hole(const MaxwellGarnettMedium& m, double k,
                            QuadratureSpec spec);

// Long-wavelength closed form of the longitudinal scattering factor in a
// Maxwell Garnett medium: 2 L (L - 1) Int d^3q/(2pi)^3 G_eff_perp(q) with
// L the Lorenz-Lorentz factor. Zero for eps = 1; Im <= 0 for passive media.
// Warns when k*xi > 0.3 (outside the long-wavelength regime).
cdouble phi_par_mg_longwave(const MaxwellGarnettMedium& m, double k,
                            const QuadratureSpec& spec);

// ---------------------------------------------------------------------------
// Normal modes.
// ---------------------------------------------------------------------------

// Complex-q roots of the transverse dispersion relation
// k^2 [1 + chi_perp(q)] = q^2 and of the longitudinal relation
// 1 + chi_par(q) = 0, located inside a rectangle of the complex q plane by
// the argument principle and polished by Newton iteration. The count from
// the winding number must match the number of converged roots.
struct DispersionRoots {
    std::vector<cdouble> q_perp;
    std::vector<cdouble> q_par;
    std::vector<double> residual_perp;
    std::vector<double> residual_par;
    double k = 0.0;
};

DispersionRoots dispersion_roots(const SusceptibilityModel& m, double k,
                                 double re_min = 0.0, double re_max = 0.0,
                                 double im_halfwidth = 0.0);

}  // namespace emvac
