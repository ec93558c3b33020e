#include "emvac/spectral.hpp"

#include <cmath>

namespace emvac {

ComplexPermittivitySqrt passive_sqrt(cdouble eps) {
    if (eps == cdouble(0.0, 0.0))
        throw ConfigError("passive_sqrt: eps must be nonzero");
    // principal branch: Re >= 0 always, and Im >= 0 whenever Im eps >= 0
    cdouble s = std::sqrt(eps);
    if (std::real(s) < 0.0) s = -s;
    ComplexPermittivitySqrt out{eps, s, std::imag(s) >= 0.0,
                                std::real(s) >= 0.0};
    const double resid = std::abs(s * s - eps);
    if (resid > 1e-14 * std::max(1.0, std::abs(eps)))
        throw NumericError("passive_sqrt: branch residual " +
                           std::to_string(resid));
    return out;
}

void g0_realspace_components(double r, double k, cdouble& g_t, cdouble& g_l) {
    if (!(r > 0.0)) throw ConfigError("g0_realspace: separation must be > 0");
    if (!(k > 0.0)) throw ConfigError("g0_realspace: k must be > 0");
    const double kr = k * r;
    const cdouble pref = -std::exp(iu * kr) / (4.0 * pi * r);
    const double inv = 1.0 / kr;
    g_t = pref * (1.0 + iu * inv - inv * inv);
    g_l = pref * (2.0 * inv * inv - 2.0 * iu * inv);
}

Eigen::Matrix3cd g0_realspace(const Eigen::Vector3d& r, double k) {
    const double rn = r.norm();
    cdouble g_t, g_l;
    g0_realspace_components(rn, k, g_t, g_l);
    const Eigen::Vector3d u = r / rn;
    Eigen::Matrix3cd out;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const double proj = u[a] * u[b];
            out(a, b) = g_t * ((a == b ? 1.0 : 0.0) - proj) + g_l * proj;
        }
    return out;
}

double phi0_par(double a, double k) {
    if (!(a > 0.0)) throw ConfigError("phi0_par: radius must be > 0");
    if (!(k > 0.0)) throw ConfigError("phi0_par: k must be > 0");
    if (k * a > 0.3)
        warn("phi0_par: quasi-static factor used at k*a = " +
             std::to_string(k * a) + " > 0.3");
    return 1.0 / ((4.0 * pi / 3.0) * a * a * a * k * k);
}

}  // namespace emvac
