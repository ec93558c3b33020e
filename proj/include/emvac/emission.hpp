#pragma once

#include "emvac/propagators.hpp"

namespace emvac {

// Emission-power decomposition of an embedded dipole, all pieces normalised
// by the free-space emitted power. Transverse and longitudinal channels each
// split into a coherent part, Re{L} Im{G}, and an extinction part,
// Im{L} Re{G}, where L = chi / (rho alpha) is the local-field vertex. The
// four pieces sum to w_total pointwise; w_direct is the trace of the Dyson
// propagator alone (power launched into the medium), and w_indirect is the
// remainder of the coherent channel.
struct EmissionBreakdown {
    double w_coh_perp = 0.0;
    double w_ext_perp = 0.0;
    double w_coh_par = 0.0;
    double w_ext_par = 0.0;
    double w_direct = 0.0;
    double w_indirect = 0.0;
    double w_total = 0.0;
    double k = 0.0;
};

EmissionBreakdown emission_decomposition(const SusceptibilityModel& m,
                                         double k, const QuadratureSpec& spec);

// Local densities of states, in units of modes per volume per frequency.
// n_free = k^2/pi^2 is the free-space value.

double ldos_free(double k);

// LDOS of coherent light propagation: -(4 k / pi) Im Int d^3q/(2pi)^3 G_perp.
// For a lossless index n this is n * n_free.
double ldos_light(const SusceptibilityModel& m, double k,
                  const QuadratureSpec& spec);

// LDOS of total dipole emission from the self-field factors:
// -(2 k / pi) Im{2 phi0 + 2 phi_sc_perp + phi_sc_par}.
double ldos_emission(const PhiFactors& phi);

// Closed form of the coherent-emission LDOS in a Maxwell Garnett medium:
// ((Re eps + 2)/3) Re{sqrt(eps)} n_free.
double ldos_coherent_mg(const MaxwellGarnettMedium& m, double k);

// Assembled LDOS report for a Maxwell Garnett medium. The longitudinal
// scattering factor uses the long-wavelength closed form (the q-independent
// susceptibility misses the transverse content of the longitudinal channel
// at finite q xi [the far-field factor L(L-1)n]).
struct LdosReport {
    double n_free = 0.0;
    double n_light = 0.0;
    double n_emis = 0.0;
    double n_coh = 0.0;
    PhiFactors phi;  // phi_sc_par replaced by the long-wavelength form
    double k = 0.0;
};

LdosReport ldos_report(const MaxwellGarnettMedium& m, double k,
                       const QuadratureSpec& spec);

// Weight of each transverse normal mode in the renormalized emission:
// Z = Re{chi(q_mode) / (rho alpha)}.
std::vector<double> renormalization_residues(const SusceptibilityModel& m,
                                             double k,
                                             const DispersionRoots& roots);

// Far-field coherent power at distance r in an absorbing medium:
// w_coh attenuated by exp(-2 kappa k r), kappa = Im sqrt(eps).
double beer_lambert_farfield(double w_coh, cdouble eps, double k, double r);

}  // namespace emvac
