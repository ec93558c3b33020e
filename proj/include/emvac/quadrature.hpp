#pragma once

#include <functional>

#include "emvac/types.hpp"

namespace emvac {

// Issue a non-fatal diagnostic. Default handler writes to stderr; tests may
// install their own sink.
void warn(const std::string& msg);
void set_warning_handler(std::function<void(const std::string&)> handler);

struct IntegralResult {
    cdouble value{0.0, 0.0};
    double error_estimate = 0.0;
    long n_evals = 0;
    int n_intervals = 0;
    double eta_used = 0.0;       // 0 when no retarded regularisation was applied
    bool extrapolated = false;   // true when the eta -> 0 limit was taken
};

// Adaptive Gauss-Kronrod 7/15 over [a, b] for a complex integrand. Initial
// intervals are split at the supplied breakpoints; the worst interval is
// bisected until the accumulated error estimate meets rel_tol or the interval
// budget is exhausted (then: QuadratureError carrying the running estimate).
IntegralResult integrate_gk(const std::function<cdouble(double)>& f, double a,
                            double b, double rel_tol, int max_subdivisions,
                            std::vector<double> breakpoints = {});

// Radial momentum integral
//     (1 / 2 pi^2) \int_0^{q_max} q^2 f(q, eta) dq
// which is the isotropic reduction of \int d^3q/(2 pi)^3. The integrand
// receives the regularisation parameter so it can shift its poles off the
// real axis via k^2 -> k^2 (1 + i eta)^2. When spec.eta > 0 the integral is
// evaluated at eta and eta/2 and Richardson-extrapolated to eta -> 0, which
// removes the O(eta) bias of the regularised integrand.
//
// `poles` lists real-axis pole positions (pass {k} for free-space kernels);
// their neighbourhoods are pre-seeded as quadrature breakpoints.
IntegralResult radial_integral(const std::function<cdouble(double, double)>& f,
                               const QuadratureSpec& spec, double k,
                               std::vector<double> poles = {});

// Retarded pole shift: k^2 (1 + i eta)^2.
inline cdouble k2_retarded(double k, double eta) {
    const cdouble z = cdouble(1.0, eta);
    return k * k * z * z;
}

// Retarded pole shift for complex wavenumbers (analytic continuation paths).
inline cdouble k2_retarded(cdouble k, double eta) {
    const cdouble z = cdouble(1.0, eta);
    return k * k * z * z;
}

}  // namespace emvac
