#pragma once

#include <Eigen/Dense>

#include "emvac/quadrature.hpp"
#include "emvac/types.hpp"

namespace emvac {

// Free-space electromagnetic propagators. Momentum-space kernels follow the
// retarded prescription: poles are shifted via k^2 -> k^2 (1 + i eta)^2, so
// Im ln(k^2 - q^2 + i0) = +pi on q > k.

// Transverse kernel 1 / (k^2 (1 + i eta)^2 - q^2). With eta = 0 the value is
// real and singular at q = k; quadrature callers must pass eta > 0.
inline cdouble g0_perp(double q, double k, double eta = 0.0) {
    if (!(k > 0.0)) throw ConfigError("g0_perp: k must be > 0");
    if (!(q >= 0.0)) throw ConfigError("g0_perp: q must be >= 0");
    return 1.0 / (k2_retarded(k, eta) - q * q);
}

// Longitudinal kernel 1 / k^2 (q-independent: the longitudinal photon does
// not propagate).
inline double g0_par(double k) {
    if (!(k > 0.0)) throw ConfigError("g0_par: k must be > 0");
    return 1.0 / (k * k);
}

// Real-space dyadic propagator, decomposed along the separation direction:
//     G0(r) = g_t(r) (I - rr) + g_l(r) rr
//     g_t(r) = -(e^{ikr} / 4 pi r) [1 + i/(kr) - 1/(kr)^2]
//     g_l(r) = -(e^{ikr} / 4 pi r) [2/(kr)^2 - 2i/(kr)]
// Satisfies G0(-r) = G0(r)^T (reciprocity) and is transverse in the far
// field (g_l ~ 1/r^2 against g_t ~ 1/r).
Eigen::Matrix3cd g0_realspace(const Eigen::Vector3d& r, double k);

// Scalar radial components of the dyadic above.
void g0_realspace_components(double r, double k, cdouble& g_t, cdouble& g_l);

// Transverse self-field factor of a point dipole: phi0_perp = -i k / 4 pi.
// The real (divergent) part is absorbed into the bare polarizability.
inline cdouble phi0_perp(double k) {
    if (!(k > 0.0)) throw ConfigError("phi0_perp: k must be > 0");
    return cdouble(0.0, -k / (4.0 * pi));
}

// Variant that keeps an explicit real part chosen so a bare Lorentzian
// resonator at k0 is reproduced: Re = -3 / (2 k0^2 alpha0).
inline cdouble phi0_perp_lorentzian(double k, double k0, double alpha0) {
    if (!(k > 0.0) || !(k0 > 0.0))
        throw ConfigError("phi0_perp_lorentzian: wavenumbers must be > 0");
    if (alpha0 == 0.0)
        throw ConfigError("phi0_perp_lorentzian: alpha0 must be nonzero");
    return cdouble(-1.5 / (k0 * k0 * alpha0), -k / (4.0 * pi));
}

// Longitudinal self-field factor for a small sphere of radius a:
//     phi0_par = 1 / ((4 pi / 3) a^3 k^2).
// Valid in the quasi-static regime; warns when k a > 0.3.
double phi0_par(double a, double k);

}  // namespace emvac
