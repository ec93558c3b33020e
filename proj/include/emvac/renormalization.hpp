#pragma once

#include <functional>

#include "emvac/propagators.hpp"

namespace emvac {

// Dressing of a bare polarizability by its own radiated field:
//     alpha_tilde = alpha0 / (1 + (k^2/3) alpha0 [2 phi0 + 2 phi_sc_perp + phi_sc_par]).
// In free space this reproduces the optical theorem
//     Im alpha_tilde = (k^3 / 6 pi) |alpha_tilde|^2.
cdouble renormalize_alpha(cdouble alpha0, const PhiFactors& phi);

// Stationary power balance of a dipole driven at wavenumber k by a field of
// squared magnitude E0^2. `total` is extinction via Im alpha_tilde;
// `radiated` and `absorbed` split it through the local-field route. The two
// routes agree identically (same algebra, different grouping).
struct PowerBalance {
    double total = 0.0;
    double radiated = 0.0;
    double absorbed = 0.0;
};
PowerBalance stimulated_power(cdouble alpha0, const PhiFactors& phi,
                              double E0_mag2);

// Dressed resonance of a bare oscillator with static strength alpha0 and
// bare resonance k0, embedded in a medium described by phi_of_k:
//     (k/k0)^2 - 1 = (alpha0 k^2 / 3) Re{2 phi_sc_perp + phi_sc_par}(k).
// gamma is the linewidth at the dressed resonance,
//     gamma = -(alpha0_tilde / 3) k_res^3 Im{2 phi0 + 2 phi_sc_perp + phi_sc_par}
// with alpha0_tilde = alpha0 (k0/k_res)^2. When the medium has no scattering
// response the closed-form answer k_res = k0, gamma = alpha0 k0^4 / 6 pi is
// returned without iteration.
struct RenormalizedPolarizability {
    cdouble alpha_tilde{0.0, 0.0};  // dressed value at the resonance
    double k_res = 0.0;
    double gamma = 0.0;
    double alpha0_tilde = 0.0;  // bare strength rescaled to the resonance
    double k0 = 0.0;
    double gamma0 = 0.0;  // free-space linewidth alpha0 k0^4 / 6 pi
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> k_res_all;  // every root found, ascending
};

RenormalizedPolarizability solve_kres(
    double alpha0, double k0,
    const std::function<PhiFactors(double)>& phi_of_k,
    double bracket_lo = 0.5, double bracket_hi = 2.0);

/// Self-consistent dressing inside a correlation-hole medium: the medium's
// alpha_tilde is the fixed point of
//     alpha -> alpha0 / (1 + (k0^2/3) alpha0 Sum_phi[medium(alpha)])
// with the self-field taken from phi_factors_hole (calibrated q_c window),
// iterated with damping 0.5 to relative tolerance 1e-10 (at most 200 steps;
// failure carries the iterate history) and finished with one undamped
// application. rho = 0 reduces exactly to the free-space dressed value.
struct SelfConsistentMedium {
    MaxwellGarnettMedium medium;
    PhiFactors phi;          // at k0, for the converged medium
    cdouble alpha_tilde{0.0, 0.0};
    int iterations = 0;
    double residual = 0.0;
};

SelfConsistentMedium self_consistent_medium(double rho, double alpha0,
                                            double k0, double xi,
                                            QuadratureSpec spec = {});

}  // namespace emvac
