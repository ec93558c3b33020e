#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Internal unit system: c = hbar = eps0 = 1. Frequencies and wavenumbers
// coincide (omega = k), polarizabilities carry dimension length^3, and all
// propagator integrals are expressed in these units unless a function says
// otherwise.

namespace emvac {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cdouble iu{0.0, 1.0};

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps these onto process exit codes:
//   ConfigError -> 2, NumericError -> 3, ValidationError -> 4.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs: domain violations, malformed configuration, model misuse.
struct ConfigError : Error {
    using Error::Error;
};

// Numerical failure: non-convergence, singular solves, branch ambiguities.
struct NumericError : Error {
    using Error::Error;
};

// A numerical result exists but failed a physics or consistency check.
struct ValidationError : Error {
    using Error::Error;
};

// Quadrature did not converge; carries the best estimate so callers can
// report it alongside the failure.
struct QuadratureError : NumericError {
    QuadratureError(const std::string& msg, cdouble est, double err)
        : NumericError(msg), estimate(est), error_estimate(err) {}
    cdouble estimate;
    double error_estimate;
};

// Fixed-point iteration failed; carries the iterate history.
struct FixedPointError : NumericError {
    FixedPointError(const std::string& msg, std::vector<cdouble> hist)
        : NumericError(msg), history(std::move(hist)) {}
    std::vector<cdouble> history;
};

// Frequency integral reached its cutoff before the integrand decayed;
// carries the partial value accumulated up to the cutoff.
struct CutoffError : NumericError {
    CutoffError(const std::string& msg, double partial)
        : NumericError(msg), partial_value(partial) {}
    double partial_value;
};

// ---------------------------------------------------------------------------
// Small value types shared across modules.
// ---------------------------------------------------------------------------

// Positive real wavenumber (= frequency in internal units).
struct Wavenumber {
    double value;

    explicit Wavenumber(double k) : value(k) {
        if (!(k > 0.0) || !std::isfinite(k))
            throw ConfigError("Wavenumber must be positive and finite, got " +
                              std::to_string(k));
    }
    static Wavenumber from_wavelength(double lambda) {
        if (!(lambda > 0.0))
            throw ConfigError("wavelength must be positive");
        return Wavenumber(2.0 * pi / lambda);
    }
    operator double() const { return value; }
};

// Square root of a complex permittivity on the passive branch
// (Im sqrt_eps >= 0 whenever Im eps >= 0), with the branch recorded.
struct ComplexPermittivitySqrt {
    cdouble eps;
    cdouble sqrt_eps;
    bool im_nonneg;  // Im sqrt_eps >= 0 (decaying waves in a passive medium)
    bool re_nonneg;  // Re sqrt_eps >= 0 (forward phase propagation)
};

// Principal branch keeps Re >= 0; for passive eps (Im >= 0) that branch also
// has Im >= 0, which is the physical retarded choice.
ComplexPermittivitySqrt passive_sqrt(cdouble eps);

// Controls for momentum-space radial quadrature.
//   q_max: upper limit of the radial q integral
//   eta: retarded regularisation, k^2 -> k^2 (1 + i eta)^2; extrapolated out
//        by evaluating at eta and eta/2 (Richardson) when requested
//   rel_tol: target relative tolerance on the integral
//   max_subdivisions: adaptive interval budget
struct QuadratureSpec {
    double q_max = 40.0;
    double eta = 1e-6;
    double rel_tol = 1e-9;
    int max_subdivisions = 4000;

    void validate() const {
        if (!(q_max > 0.0)) throw ConfigError("QuadratureSpec: q_max must be > 0");
        if (!(eta >= 0.0)) throw ConfigError("QuadratureSpec: eta must be >= 0");
        if (!(rel_tol > 0.0) || rel_tol > 1e-2)
            throw ConfigError("QuadratureSpec: rel_tol must lie in (0, 1e-2]");
        if (max_subdivisions < 1)
            throw ConfigError("QuadratureSpec: max_subdivisions must be >= 1");
    }
};

}  // namespace emvac
