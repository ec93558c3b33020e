#pragma once

#include "emvac/media.hpp"
#include "emvac/quadrature.hpp"
#include "emvac/renormalization.hpp"

namespace emvac {

// Vacuum energy densities of the dressed electromagnetic ground state.
// Sign convention: every density reports its magnitude together with the
// raw sign of the underlying frequency integral, so assembly code can apply
// either convention without re-deriving it.

// Bulk (Schwinger) energy density shift of a transparent medium:
//     (1 / 6 pi^2) Int_0^omega_max  w^3 [1 - n(w)^3] dw,   n = Re sqrt(eps).
// Throws CutoffError carrying the partial value when |1 - n^3| has not
// decayed below 1e-8 at omega_max (the integral is then cutoff-dominated).
double schwinger_bulk(const std::function<cdouble(double)>& eps_of_omega,
                      double omega_max, const QuadratureSpec& spec);

// Mode density behind the bulk energy: (w^2 / 3 pi^2) n^3. Relates to the
// coherent-light LDOS by n_light = (3 / n^2) n_sch.
double ldos_schwinger_bulk(double omega, cdouble eps);

struct VacuumEnergyDensity {
    double magnitude = 0.0;
    int raw_sign = 0;        // sign of the raw frequency integral
    double estimate = 0.0;   // resonance-dominated closed-form magnitude
    double omega_max = 0.0;  // cutoff actually integrated to
};

// Effective-volume energy density of a Maxwell Garnett medium relative to
// the Schwinger bulk:  -rho Int dw/2pi  Im ln[ L^3(w) / eps(w) ].
// The estimate is (rho f^2 / 12) (w_res/2 + gamma/2pi), valid for f << 1
// (warns above f = 0.1).
VacuumEnergyDensity delta_f_mg(const LorentzianDielectric& d, double rho,
                               const QuadratureSpec& spec,
                               double omega_max = 0.0);

// Local-field energy density:  -rho Int dw/2pi  Im ln[ L^3(w) ],
// estimate (rho f / 2) (w_res/2 + gamma/2pi).
VacuumEnergyDensity f_lff_mg(const LorentzianDielectric& d, double rho,
                             const QuadratureSpec& spec,
                             double omega_max = 0.0);

// Decomposition of the dressed vacuum energy density into a polarizability
// term, saturated susceptibility terms, and the transverse bulk term. The
// q-independent factors saturate their momentum integral at the density rho;
// the bulk term keeps its full momentum integral and reduces to
// schwinger_bulk for an effective medium. Logarithm phases are unwound along
// the frequency grid; a residual jump above pi/8 after refinement raises
// NumericError.
struct VacuumEnergyDecomposition {
    double alpha_term = 0.0;     // -rho Int Im 3 ln(alpha'/alpha)
    double chi_perp_term = 0.0;  // -rho Int Im 2 ln chi
    double chi_par_term = 0.0;   // -rho Int Im ln[chi/(1+chi)]
    double bulk_term = 0.0;      // -Int dw Int d3q Im 2 ln(G/G0)
    double total = 0.0;
    double branch_max_jump = 0.0;
    double omega_max = 0.0;
};

VacuumEnergyDecomposition vacuum_energy_decomposition(
    const std::function<cdouble(double)>& chi_of_omega,
    const std::function<cdouble(double)>& alpha_prime_of_omega,
    const std::function<cdouble(double)>& alpha_of_omega, double rho,
    double omega_max, const QuadratureSpec& spec);

// Resonant radiative shift of a dipole of squared moment mu2, evaluated at
// the complex resonance k_res + i gamma:
//     E = (mu2 / 3) Re{ k^2 [2 phi_sc_perp + phi_sc_par] }.
double lamb_shift_res(const std::function<cdouble(cdouble)>& sum_sc_of_k,
                      double mu2, double k_res, double gamma);

// Off-resonant shift from the Wick-rotated frequency integral
//     E = -(1/4pi) Int_0^u* du u^2 [2 phi_sc_perp + phi_sc_par](iu)
//                               [alpha(iu) + alpha(-iu)],
// truncated at the u where the integrand falls below 1e-10 of its peak.
// Raises NumericError when u_max is reached before that decay.
double lamb_shift_off(const std::function<cdouble(cdouble)>& sum_sc_of_k,
                      const LorentzianPolarizability& pol, double u_max,
                      const QuadratureSpec& spec);

// Full report assembled by the CLI runner.
struct VacuumEnergyReport {
    double f_sch_bulk = 0.0;
    VacuumEnergyDensity delta_f;
    VacuumEnergyDensity f_lff;
    double lamb_res = 0.0;
    double lamb_off = 0.0;
    double omega_max = 0.0;
};

}  // namespace emvac
